#include "pathkernel/manifold.hpp"

#include <cmath>
#include <sstream>

#include "pathkernel/errors.hpp"

namespace pathkernel {

namespace {

constexpr double kHyperboloidTol = 1e-12;
constexpr double kUnitTol = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be a positive finite number");
  }
}

// Minkowski bilinear form <x,y> = x0 y0 - x1 y1 - x2 y2 - x3 y3.
double minkowski(const Point& x, const Point& y) {
  return x.coords[0] * y.coords[0] - x.coords[1] * y.coords[1] - x.coords[2] * y.coords[2] -
         x.coords[3] * y.coords[3];
}

double wrap(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0.0) r += period;
  if (r >= period) r = 0.0;  // r + period rounded up to period
  return r;
}

}  // namespace

ManifoldModel ManifoldModel::euclidean(int dim) {
  if (dim < 1) throw DomainError("euclidean dimension must be >= 1");
  return ManifoldModel(model::Euclidean{dim});
}

ManifoldModel ManifoldModel::hyperbolic3() { return ManifoldModel(model::Hyperbolic3{}); }

ManifoldModel ManifoldModel::flat_torus(std::vector<double> periods) {
  if (periods.empty()) throw DomainError("torus dimension must be >= 1");
  for (double p : periods) require_positive(p, "torus period");
  return ManifoldModel(model::FlatTorus{std::move(periods)});
}

ManifoldModel ManifoldModel::circle(double circumference) {
  require_positive(circumference, "circle circumference");
  return ManifoldModel(model::Circle{circumference});
}

ManifoldModel ManifoldModel::dirichlet_interval(double length) {
  require_positive(length, "interval length");
  return ManifoldModel(model::DirichletInterval{length});
}

ManifoldModel ManifoldModel::compactified(const ManifoldModel& base) {
  if (!base.is<model::DirichletInterval>()) {
    throw DomainError("only substochastic models (dirichlet interval) can be compactified");
  }
  return ManifoldModel(model::Compactified{std::make_shared<const ManifoldModel>(base)});
}

int ManifoldModel::dim() const {
  return std::visit(overloaded{
                        [](const model::Euclidean& e) { return e.dim; },
                        [](const model::Hyperbolic3&) { return 3; },
                        [](const model::FlatTorus& t) { return static_cast<int>(t.periods.size()); },
                        [](const model::Circle&) { return 1; },
                        [](const model::DirichletInterval&) { return 1; },
                        [](const model::Compactified& c) { return c.base->dim(); },
                    },
                    v_);
}

int ManifoldModel::coord_count() const {
  if (is<model::Hyperbolic3>()) return 4;
  return dim();
}

std::vector<double> ManifoldModel::periods() const {
  if (auto t = std::get_if<model::FlatTorus>(&v_)) return t->periods;
  if (auto c = std::get_if<model::Circle>(&v_)) return {c->circumference};
  return {};
}

const ManifoldModel& ManifoldModel::interior() const {
  if (auto c = std::get_if<model::Compactified>(&v_)) return *c->base;
  return *this;
}

std::string ManifoldModel::name() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{
                 [&](const model::Euclidean& e) { os << "euclidean:" << e.dim; },
                 [&](const model::Hyperbolic3&) { os << "hyperbolic3"; },
                 [&](const model::FlatTorus& t) {
                   os << "torus:";
                   for (std::size_t i = 0; i < t.periods.size(); ++i) {
                     os << (i ? "," : "") << t.periods[i];
                   }
                 },
                 [&](const model::Circle& c) { os << "circle:" << c.circumference; },
                 [&](const model::DirichletInterval& d) { os << "dirichlet:" << d.length; },
                 [&](const model::Compactified& c) { os << "compactified:" << c.base->name(); },
             },
             v_);
  return os.str();
}

bool operator==(const ManifoldModel& a, const ManifoldModel& b) {
  if (a.v_.index() != b.v_.index()) return false;
  return std::visit(
      overloaded{
          [&](const model::Euclidean& e) { return e.dim == b.as<model::Euclidean>().dim; },
          [&](const model::Hyperbolic3&) { return true; },
          [&](const model::FlatTorus& t) { return t.periods == b.as<model::FlatTorus>().periods; },
          [&](const model::Circle& c) {
            return c.circumference == b.as<model::Circle>().circumference;
          },
          [&](const model::DirichletInterval& d) {
            return d.length == b.as<model::DirichletInterval>().length;
          },
          [&](const model::Compactified& c) {
            return *c.base == *b.as<model::Compactified>().base;
          },
      },
      a.v_);
}

void validate_point(const ManifoldModel& m, const Point& p) {
  if (p.cemetery) {
    if (!m.is<model::Compactified>()) {
      throw DomainError("cemetery point on non-compactified model " + m.name());
    }
    return;
  }
  const ManifoldModel& in = m.interior();
  if (static_cast<int>(p.coords.size()) != in.coord_count()) {
    throw DomainError("point has " + std::to_string(p.coords.size()) + " coordinates, model " +
                      in.name() + " expects " + std::to_string(in.coord_count()));
  }
  for (double c : p.coords) {
    if (!std::isfinite(c)) throw DomainError("point coordinate is not finite");
  }
  if (in.is<model::Hyperbolic3>()) {
    const double x0 = p.coords[0];
    const double q = minkowski(p, p);
    if (x0 < 1.0 - kHyperboloidTol || std::abs(q - 1.0) > kHyperboloidTol * std::max(1.0, x0 * x0)) {
      throw DomainError("point is not on the upper sheet of the hyperboloid");
    }
  } else if (in.is_periodic()) {
    const auto per = in.periods();
    for (std::size_t i = 0; i < per.size(); ++i) {
      if (p.coords[i] < 0.0 || p.coords[i] >= per[i]) {
        throw DomainError("periodic coordinate outside fundamental domain [0, period)");
      }
    }
  } else if (auto d = std::get_if<model::DirichletInterval>(&in.variant())) {
    if (!(p.coords[0] > 0.0 && p.coords[0] < d->length)) {
      throw DomainError("interval point must lie strictly inside (0, L)");
    }
  }
}

Point origin(const ManifoldModel& m) {
  const ManifoldModel& in = m.interior();
  if (in.is<model::Hyperbolic3>()) return Point{1.0, 0.0, 0.0, 0.0};
  if (auto d = std::get_if<model::DirichletInterval>(&in.variant())) return Point{d->length / 2};
  return Point(std::vector<double>(in.coord_count(), 0.0));
}

Point hyperboloid_point(double x1, double x2, double x3) {
  return Point{std::sqrt(1.0 + x1 * x1 + x2 * x2 + x3 * x3), x1, x2, x3};
}

double distance(const ManifoldModel& m, const Point& x, const Point& y) {
  if (x.cemetery || y.cemetery) throw DomainError("distance to the cemetery state is undefined");
  validate_point(m, x);
  validate_point(m, y);
  const ManifoldModel& in = m.interior();
  return std::visit(
      overloaded{
          [&](const model::Euclidean&) {
            double s = 0.0;
            for (std::size_t i = 0; i < x.coords.size(); ++i) {
              const double d = x.coords[i] - y.coords[i];
              s += d * d;
            }
            return std::sqrt(s);
          },
          [&](const model::Hyperbolic3&) {
            const double b = minkowski(x, y);
            if (b >= 2.0) return std::acosh(b);
            // 2 sinh^2(rho/2) = b - 1 = -<x-y, x-y>/2, free of cancellation near rho = 0.
            double q = 0.0;
            for (int i = 1; i < 4; ++i) {
              const double d = x.coords[i] - y.coords[i];
              q += d * d;
            }
            const double d0 = x.coords[0] - y.coords[0];
            q -= d0 * d0;
            return 2.0 * std::asinh(std::sqrt(std::max(0.0, q)) / 2.0);
          },
          [&](const auto&) {
            // periodic and interval models: coordinatewise
            const auto per = in.periods();
            double s = 0.0;
            for (std::size_t i = 0; i < x.coords.size(); ++i) {
              double d = std::abs(x.coords[i] - y.coords[i]);
              if (!per.empty()) d = std::min(d, per[i] - d);
              s += d * d;
            }
            return std::sqrt(s);
          },
      },
      in.variant());
}

Point exp_point(const ManifoldModel& m, const Point& base, const std::vector<double>& direction,
                double r) {
  if (!m.interior().is<model::Hyperbolic3>()) throw DomainError("exp_point requires hyperbolic3");
  validate_point(m, base);
  if (direction.size() != 3) throw DomainError("direction must have 3 components");
  const double n2 = direction[0] * direction[0] + direction[1] * direction[1] +
                    direction[2] * direction[2];
  if (std::abs(std::sqrt(n2) - 1.0) > kUnitTol) throw DomainError("direction is not a unit vector");
  if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("radius must be nonnegative");

  // Boost taking (1,0,0,0) to base, applied to the tangent vector (0, direction).
  const double p0 = base.coords[0];
  const double pd = base.coords[1] * direction[0] + base.coords[2] * direction[1] +
                    base.coords[3] * direction[2];
  const double f = pd / (1.0 + p0);
  const double v[4] = {pd, direction[0] + base.coords[1] * f, direction[1] + base.coords[2] * f,
                       direction[2] + base.coords[3] * f};
  const double ch = std::cosh(r);
  const double sh = std::sinh(r);
  Point out{0.0, 0.0, 0.0, 0.0};
  for (int i = 1; i < 4; ++i) out.coords[i] = ch * base.coords[i] + sh * v[i];
  // re-project onto the upper sheet
  out.coords[0] = std::sqrt(1.0 + out.coords[1] * out.coords[1] + out.coords[2] * out.coords[2] +
                            out.coords[3] * out.coords[3]);
  return out;
}

CoveringDescriptor CoveringDescriptor::of(const ManifoldModel& periodic_base) {
  if (!periodic_base.is_periodic()) {
    throw DomainError("covering requires a torus or circle base, got " + periodic_base.name());
  }
  return CoveringDescriptor{periodic_base, ManifoldModel::euclidean(periodic_base.dim()),
                            periodic_base.periods()};
}

Point project_point(const CoveringDescriptor& cov, const Point& lifted) {
  validate_point(cov.total, lifted);
  Point out = lifted;
  for (std::size_t i = 0; i < cov.periods.size(); ++i) {
    out.coords[i] = wrap(lifted.coords[i], cov.periods[i]);
  }
  return out;
}

Point lift_point_near(const CoveringDescriptor& cov, const Point& x, const Point& anchor) {
  validate_point(cov.base, x);
  validate_point(cov.total, anchor);
  Point out = x;
  for (std::size_t i = 0; i < cov.periods.size(); ++i) {
    const double L = cov.periods[i];
    const double k0 = std::floor((anchor.coords[i] - x.coords[i]) / L);
    double best_k = k0;
    double best_d = std::abs(x.coords[i] + k0 * L - anchor.coords[i]);
    for (double k : {k0 - 1.0, k0 + 1.0, k0 + 2.0}) {
      const double d = std::abs(x.coords[i] + k * L - anchor.coords[i]);
      if (d < best_d || (d == best_d && k < best_k)) {
        best_d = d;
        best_k = k;
      }
    }
    out.coords[i] = x.coords[i] + best_k * L;
  }
  return out;
}

std::vector<long long> lattice_coefficients(const CoveringDescriptor& cov, const Point& lifted) {
  std::vector<long long> k(cov.periods.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    k[i] = static_cast<long long>(std::floor(lifted.coords[i] / cov.periods[i]));
  }
  return k;
}

}  // namespace pathkernel
