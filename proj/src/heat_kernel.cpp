#include "pathkernel/heat_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pathkernel/errors.hpp"
#include "pathkernel/quadrature.hpp"

namespace pathkernel {

namespace {

constexpr double kPi = std::numbers::pi;

void require_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("time must be positive and finite");
}

void require_interior(const ManifoldModel& m, const Point& p) {
  if (p.cemetery) throw DomainError("cemetery point passed to interior kernel; use eval_compactified");
  validate_point(m, p);
}

double gaussian_1d(double t, double d) {
  return std::exp(-d * d / (4.0 * t)) / std::sqrt(4.0 * kPi * t);
}

// Upper integration radius where exp(-r^2 / 4t) has dropped below e^{-100}.
double gaussian_reach(double t, double extra = 0.0) { return std::sqrt(4.0 * t) * (10.0 + extra); }

double unit_sphere_area(int n) {
  // area of S^{n-1}
  return 2.0 * std::pow(kPi, n / 2.0) / std::tgamma(n / 2.0);
}

// Radial kernel p_t(r) for models where the kernel depends only on distance.
double radial_profile(const TransitionKernel& k, double t, double r) {
  const ManifoldModel& m = k.model();
  if (k.kind() == KernelKind::Cauchy) return t / (kPi * (t * t + r * r));
  if (m.is<model::Hyperbolic3>()) return hyperbolic3_kernel(t, r);
  const int n = m.dim();
  return std::pow(4.0 * kPi * t, -n / 2.0) * std::exp(-r * r / (4.0 * t));
}

// Radial volume element: area of the geodesic sphere of radius r.
double sphere_area(const ManifoldModel& m, double r) {
  if (m.is<model::Hyperbolic3>()) {
    const double s = std::sinh(r);
    return 4.0 * kPi * s * s;
  }
  const int n = m.dim();
  return unit_sphere_area(n) * std::pow(r, n - 1);
}

double radial_reach(const TransitionKernel& k, double t, double power = 0.0) {
  if (k.model().is<model::Hyperbolic3>()) {
    // radial density ~ exp(-(r - 2t)^2 / 4t) times polynomial
    return 2.0 * t + gaussian_reach(t, std::sqrt(power + 3.0)) + 10.0;
  }
  return gaussian_reach(t, std::sqrt(power + k.model().dim()));
}

// Lay out the interior of a compactified model for integration.
const ManifoldModel& base_of(const TransitionKernel& k) { return k.model().interior(); }

// Sum over k of c * exp(-(d + k P)^2 / 4t) with d reduced to [-P/2, P/2] and the
// omitted tail bounded by the geometric majorant below tolerance.
double lattice_sum(double t, double d, double period, const TruncationPolicy& policy) {
  d -= period * std::nearbyint(d / period);
  const double c = 1.0 / std::sqrt(4.0 * kPi * t);
  double sum = std::exp(-d * d / (4.0 * t));
  for (long long K = 1;; ++K) {
    if (K > policy.max_terms) throw NumericError("theta sum exceeded its term budget");
    const double kp = static_cast<double>(K) * period;
    sum += std::exp(-(d + kp) * (d + kp) / (4.0 * t)) + std::exp(-(d - kp) * (d - kp) / (4.0 * t));
    // every omitted term has |d + kP| >= u
    const double u = (static_cast<double>(K) + 0.5) * period;
    const double ratio = std::exp(-u * period / (2.0 * t));
    const double tail = 2.0 * c * std::exp(-u * u / (4.0 * t)) / (1.0 - ratio);
    if (ratio < 1.0 && tail < policy.tail_tolerance) break;
  }
  return c * sum;
}

}  // namespace

TransitionKernel::TransitionKernel(ManifoldModel model, KernelKind kind, TruncationPolicy policy)
    : model_(std::move(model)), kind_(kind), policy_(policy) {
  if (kind_ == KernelKind::Cauchy && !(model_.is<model::Euclidean>() && model_.dim() == 1)) {
    throw DomainError("the Cauchy kernel is defined on euclidean:1 only");
  }
  if (!(policy_.tail_tolerance > 0.0 && policy_.tail_tolerance < 1.0)) {
    throw DomainError("tail tolerance must lie in (0, 1)");
  }
  if (policy_.max_terms < 1) throw DomainError("max_terms must be positive");
}

std::string TransitionKernel::name() const {
  return kind_ == KernelKind::Cauchy ? std::string("cauchy") : model_.name();
}

double hyperbolic3_kernel(double t, double rho) {
  require_time(t);
  double log_ratio;  // log(rho / sinh rho)
  if (rho < 1e-4) {
    const double r2 = rho * rho;
    log_ratio = std::log1p(-r2 / 6.0 + 7.0 * r2 * r2 / 360.0);
  } else if (rho < 20.0) {
    log_ratio = std::log(rho / std::sinh(rho));
  } else {
    log_ratio = std::log(2.0 * rho) - rho - std::log1p(-std::exp(-2.0 * rho));
  }
  return std::exp(-t - 1.5 * std::log(4.0 * kPi * t) + log_ratio - rho * rho / (4.0 * t));
}

double theta_kernel_1d(double t, double d, double period, const TruncationPolicy& policy) {
  require_time(t);
  return lattice_sum(t, d, period, policy);
}

double dirichlet_kernel_images(double t, double x, double y, double length,
                               const TruncationPolicy& policy) {
  require_time(t);
  const double p = lattice_sum(t, x - y, 2.0 * length, policy) -
                   lattice_sum(t, x + y, 2.0 * length, policy);
  return std::max(0.0, p);
}

double dirichlet_kernel_series(double t, double x, double y, double length,
                               const TruncationPolicy& policy) {
  require_time(t);
  const double w = kPi / length;
  double sum = 0.0;
  for (long long m = 1;; ++m) {
    if (m > policy.max_terms) throw NumericError("sine series exceeded its term budget");
    const double md = static_cast<double>(m);
    sum += std::exp(-md * md * w * w * t) * std::sin(md * w * x) * std::sin(md * w * y);
    const double next = md + 1.0;
    const double ratio = std::exp(-(2.0 * next + 1.0) * w * w * t);
    const double tail = std::exp(-next * next * w * w * t) / (1.0 - ratio);
    if (2.0 / length * tail < policy.tail_tolerance) break;
  }
  return std::max(0.0, 2.0 / length * sum);
}

double dirichlet_kernel(double t, double x, double y, double length,
                        const TruncationPolicy& policy) {
  const double switch_time = length * length / (kPi * kPi);
  return t < switch_time ? dirichlet_kernel_images(t, x, y, length, policy)
                         : dirichlet_kernel_series(t, x, y, length, policy);
}

double eval(const TransitionKernel& k, double t, const Point& x, const Point& y) {
  require_time(t);
  const ManifoldModel& m = k.model();
  require_interior(m, x);
  require_interior(m, y);
  const ManifoldModel& in = m.interior();
  if (k.kind() == KernelKind::Cauchy) {
    const double d = x.coords[0] - y.coords[0];
    return t / (kPi * (t * t + d * d));
  }
  if (in.is<model::Euclidean>()) {
    const double r = distance(in, x, y);
    return std::pow(4.0 * kPi * t, -in.dim() / 2.0) * std::exp(-r * r / (4.0 * t));
  }
  if (in.is<model::Hyperbolic3>()) return hyperbolic3_kernel(t, distance(in, x, y));
  if (in.is_periodic()) {
    const auto per = in.periods();
    double p = 1.0;
    for (std::size_t i = 0; i < per.size(); ++i) {
      p *= lattice_sum(t, x.coords[i] - y.coords[i], per[i], k.policy());
    }
    return p;
  }
  const double len = in.as<model::DirichletInterval>().length;
  return dirichlet_kernel(t, x.coords[0], y.coords[0], len, k.policy());
}

double eval_compactified(const TransitionKernel& k, double t, const Point& x, const Point& y) {
  require_time(t);
  if (!k.model().is<model::Compactified>()) {
    throw DomainError("eval_compactified requires a compactified model");
  }
  validate_point(k.model(), x);
  validate_point(k.model(), y);
  if (!x.cemetery && !y.cemetery) return eval(k, t, x, y);
  if (x.cemetery && y.cemetery) return 1.0;
  if (y.cemetery) return 0.0;  // nothing returns from the cemetery
  const TransitionKernel base(base_of(k), KernelKind::Heat, k.policy());
  return 1.0 - total_mass(base, t, y);
}

double total_mass(const TransitionKernel& k, double t, const Point& x, double quad_tol) {
  require_time(t);
  validate_point(k.model(), x);
  const ManifoldModel& m = k.model();
  if (m.is<model::Compactified>()) {
    if (x.cemetery) return 1.0;
    const TransitionKernel base(base_of(k), KernelKind::Heat, k.policy());
    const double interior = total_mass(base, t, x, quad_tol);
    return interior + (1.0 - interior);
  }
  if (m.is<model::DirichletInterval>()) return mass_by_quadrature(k, t, x, quad_tol);
  return 1.0;
}

double mass_by_quadrature(const TransitionKernel& k, double t, const Point& x, double quad_tol) {
  require_time(t);
  validate_point(k.model(), x);
  const ManifoldModel& m = k.model();
  if (m.is<model::Compactified>()) {
    if (x.cemetery) return 1.0;
    const TransitionKernel base(base_of(k), KernelKind::Heat, k.policy());
    const double interior = mass_by_quadrature(base, t, x, quad_tol);
    return interior + eval_compactified(k, t, Point::cemetery_point(), x);
  }
  if (k.kind() == KernelKind::Cauchy) {
    const auto r = quad::real_line([&](double y) { return eval(k, t, Point{y}, x); }, x.coords[0],
                                   t, quad_tol);
    if (!r.converged) throw NumericError("mass quadrature did not converge");
    return r.value;
  }
  if (m.is<model::Euclidean>() || m.is<model::Hyperbolic3>()) {
    return quad::simpson_or_throw(
        [&](double r) { return sphere_area(m, r) * radial_profile(k, t, r); }, 0.0,
        radial_reach(k, t), quad_tol, 64);
  }
  if (m.is_periodic()) {
    const auto per = m.periods();
    double mass = 1.0;
    for (std::size_t i = 0; i < per.size(); ++i) {
      mass *= quad::simpson_or_throw(
          [&](double y) { return lattice_sum(t, y - x.coords[i], per[i], k.policy()); }, 0.0,
          per[i], quad_tol, 64);
    }
    return mass;
  }
  const double len = m.as<model::DirichletInterval>().length;
  return quad::simpson_or_throw(
      [&](double y) {
        if (y <= 0.0 || y >= len) return 0.0;
        return dirichlet_kernel(t, y, x.coords[0], len, k.policy());
      },
      0.0, len, quad_tol, 64);
}

namespace {

double ck_hyperbolic(const TransitionKernel& k, double s, double t, const Point& x, const Point& z,
                     double tol) {
  const ManifoldModel& m = k.model();
  const double d = distance(m, x, z);
  // place x at the origin and z on the first axis; integrate over y in
  // geodesic polar coordinates (r, u = cos angle) around x.
  const Point o{1.0, 0.0, 0.0, 0.0};
  const Point zz{std::cosh(d), std::sinh(d), 0.0, 0.0};
  auto inner = [&](double r) {
    const double ch = std::cosh(r), sh = std::sinh(r);
    auto g = [&](double u) {
      const double su = std::sqrt(std::max(0.0, 1.0 - u * u));
      const Point y{ch, sh * u, sh * su, 0.0};
      return eval(k, t, zz, y);
    };
    return 2.0 * kPi * quad::simpson_or_throw(g, -1.0, 1.0, tol, 8);
  };
  const double reach = radial_reach(k, std::max(s, t)) + d;
  const double conv = quad::simpson_or_throw(
      [&](double r) {
        const double sh = std::sinh(r);
        return sh * sh * hyperbolic3_kernel(s, r) * inner(r);
      },
      0.0, reach, tol, 32);
  return std::abs(conv - eval(k, s + t, zz, o));
}

}  // namespace

double chapman_kolmogorov_residual(const TransitionKernel& k, double s, double t, const Point& x,
                                   const Point& z, double quad_tol) {
  require_time(s);
  require_time(t);
  const ManifoldModel& m = k.model();
  validate_point(m, x);
  validate_point(m, z);

  if (m.is<model::Compactified>()) {
    const double len = base_of(k).as<model::DirichletInterval>().length;
    const Point inf = Point::cemetery_point();
    const double interior = quad::simpson_or_throw(
        [&](double yv) {
          if (yv <= 0.0 || yv >= len) return 0.0;
          const Point y{yv};
          return eval_compactified(k, t, z, y) * eval_compactified(k, s, y, x);
        },
        0.0, len, quad_tol, 64);
    const double atom = eval_compactified(k, t, z, inf) * eval_compactified(k, s, inf, x);
    return std::abs(interior + atom - eval_compactified(k, s + t, z, x));
  }
  if (m.is<model::Hyperbolic3>()) return ck_hyperbolic(k, s, t, x, z, quad_tol);

  if (k.kind() == KernelKind::Cauchy) {
    const double c = 0.5 * (x.coords[0] + z.coords[0]);
    const double scale = std::max({s, t, 0.5 * std::abs(x.coords[0] - z.coords[0])});
    const auto r = quad::real_line(
        [&](double y) { return eval(k, t, z, Point{y}) * eval(k, s, Point{y}, x); }, c, scale,
        quad_tol, 256);
    if (!r.converged) throw NumericError("Chapman-Kolmogorov quadrature did not converge");
    return std::abs(r.value - eval(k, s + t, z, x));
  }
  if (m.is<model::DirichletInterval>()) {
    const double len = m.as<model::DirichletInterval>().length;
    const double conv = quad::simpson_or_throw(
        [&](double yv) {
          if (yv <= 0.0 || yv >= len) return 0.0;
          const Point y{yv};
          return eval(k, t, z, y) * eval(k, s, y, x);
        },
        0.0, len, quad_tol, 64);
    return std::abs(conv - eval(k, s + t, z, x));
  }
  // Euclidean and flat tori: the kernel factorizes over coordinates.
  const auto per = m.periods();
  double conv = 1.0;
  for (int i = 0; i < m.dim(); ++i) {
    const double xi = x.coords[i], zi = z.coords[i];
    if (per.empty()) {
      const double reach = gaussian_reach(std::max(s, t));
      conv *= quad::simpson_or_throw(
          [&](double y) { return gaussian_1d(t, zi - y) * gaussian_1d(s, y - xi); },
          std::min(xi, zi) - reach, std::max(xi, zi) + reach, quad_tol, 64);
    } else {
      conv *= quad::simpson_or_throw(
          [&](double y) {
            return lattice_sum(t, zi - y, per[i], k.policy()) *
                   lattice_sum(s, y - xi, per[i], k.policy());
          },
          0.0, per[i], quad_tol, 64);
    }
  }
  return std::abs(conv - eval(k, s + t, z, x));
}

double smooth_against_kernel(const TransitionKernel& k, double t, const Point& y,
                             const std::function<double(const Point&)>& u, double quad_tol) {
  require_time(t);
  const ManifoldModel& m = k.model();
  validate_point(m, y);
  if (m.dim() != 1 || m.is<model::Compactified>()) {
    throw DomainError("delta-family check supports one-dimensional models");
  }
  auto integrand = [&](double zv) {
    const Point z{zv};
    return u(z) * eval(k, t, z, y);
  };
  if (k.kind() == KernelKind::Cauchy) {
    const auto r = quad::real_line(integrand, y.coords[0], t, quad_tol, 256);
    if (!r.converged) throw NumericError("delta-family quadrature did not converge");
    return r.value;
  }
  if (m.is<model::Euclidean>()) {
    const double reach = gaussian_reach(t);
    return quad::simpson_or_throw(integrand, y.coords[0] - reach, y.coords[0] + reach, quad_tol,
                                  64);
  }
  const double len =
      m.is<model::Circle>() ? m.periods()[0] : m.as<model::DirichletInterval>().length;
  return quad::simpson_or_throw(
      [&](double zv) {
        if (zv < 0.0 || zv >= len || (m.is<model::DirichletInterval>() && zv == 0.0)) return 0.0;
        return integrand(zv);
      },
      0.0, len, quad_tol, 64);
}

namespace {

// Integral of |r|^a p_tau(r) over the line for the Cauchy density, by
// doubling the domain until the annular increments are negligible.
double cauchy_moment(double tau, double a, double tol) {
  auto f = [&](double r) { return std::pow(r, a) * tau / (kPi * (tau * tau + r * r)); };
  double R = tau;
  double total = 2.0 * quad::simpson_or_throw(f, 0.0, R, tol, 64);
  double prev_inc = total;
  int growing = 0;
  for (int j = 0; j < 80; ++j) {
    const double inc = 2.0 * quad::simpson_or_throw(f, R, 2.0 * R, tol * R, 64);
    total += inc;
    R *= 2.0;
    if (inc <= tol * std::max(1.0, total)) return total;
    growing = inc >= prev_inc ? growing + 1 : 0;
    if (growing >= 8) break;
    prev_inc = inc;
  }
  throw DivergenceError("moment integral diverges (increments do not decay)");
}

double cauchy_pointwise(double tau, double a) {
  auto f = [&](double r) { return std::pow(r, a) * tau / (kPi * (tau * tau + r * r)); };
  double R = 16.0 * tau;
  for (int j = 0; j < 40; ++j) {
    const auto mx = quad::maximize(f, 0.0, R);
    if (mx.argmax < 0.5 * R) return mx.value;
    R *= 4.0;
  }
  throw DivergenceError("pointwise moment supremum is infinite");
}

}  // namespace

MomentCheckResult moment_check(const TransitionKernel& k, const MomentCheckConfig& cfg) {
  if (!(cfg.a > 0.0) || !(cfg.b > 0.0)) throw DomainError("moment exponents a, b must be positive");
  if (cfg.tau_grid.empty()) throw DomainError("tau grid is empty");
  const ManifoldModel& m = k.model();
  if (m.is<model::Compactified>()) throw DomainError("moment check is defined on interior models");
  if (m.is<model::FlatTorus>() && m.dim() > 1) {
    throw DomainError("moment check on tori supports one dimension");
  }
  const Point y = origin(m);
  const double a = cfg.a;
  MomentCheckResult out;
  for (double tau : cfg.tau_grid) {
    require_time(tau);
    double moment = 0.0;
    if (cfg.mode == MomentMode::Integrated) {
      if (k.kind() == KernelKind::Cauchy) {
        moment = cauchy_moment(tau, a, cfg.quad_tol);
      } else if (m.is<model::Euclidean>() || m.is<model::Hyperbolic3>()) {
        moment = quad::simpson_or_throw(
            [&](double r) { return std::pow(r, a) * sphere_area(m, r) * radial_profile(k, tau, r); },
            0.0, radial_reach(k, tau, a), cfg.quad_tol * std::pow(tau, 1.0 + cfg.b), 64);
      } else {
        const double len = m.is_periodic() ? m.periods()[0] : m.as<model::DirichletInterval>().length;
        moment = quad::simpson_or_throw(
            [&](double zv) {
              const bool inside = m.is_periodic() ? zv < len : (zv > 0.0 && zv < len);
              if (!inside) return 0.0;
              const Point z{zv};
              return std::pow(distance(m, z, y), a) * eval(k, tau, z, y);
            },
            0.0, len, cfg.quad_tol * std::pow(tau, 1.0 + cfg.b), 64);
      }
    } else {
      if (k.kind() == KernelKind::Cauchy) {
        moment = cauchy_pointwise(tau, a);
      } else if (m.is<model::Euclidean>() || m.is<model::Hyperbolic3>()) {
        moment = quad::maximize([&](double r) { return std::pow(r, a) * radial_profile(k, tau, r); },
                                0.0, radial_reach(k, tau, a))
                     .value;
      } else {
        const double len = m.is_periodic() ? m.periods()[0] : m.as<model::DirichletInterval>().length;
        const double eps = len * 1e-12;
        moment = quad::maximize(
                     [&](double zv) {
                       const Point z{zv};
                       return std::pow(distance(m, z, y), a) * eval(k, tau, z, y);
                     },
                     eps, len - eps)
                     .value;
      }
    }
    const double ratio = moment / std::pow(tau, 1.0 + cfg.b);
    if (!std::isfinite(ratio)) throw DivergenceError("moment ratio is not finite");
    out.ratios.push_back(ratio);
    out.worst_constant = std::max(out.worst_constant, ratio);
  }
  return out;
}

}  // namespace pathkernel
