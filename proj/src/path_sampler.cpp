#include "pathkernel/path_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pathkernel/errors.hpp"

namespace pathkernel {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0.0) r += period;
  if (r >= period) r = 0.0;
  return r;
}

Point hyperbolic_step(const ManifoldModel& m, const Point& x, double dt, SampleStream& s) {
  // |N(m, 2dt I)| with |m| = 2dt has density proportional to r sinh(r) exp(-r^2/4dt),
  // the radial law of the H3 heat kernel.
  const double sigma = std::sqrt(2.0 * dt);
  const double a = 2.0 * dt + sigma * s.normal();
  const double b = sigma * s.normal();
  const double c = sigma * s.normal();
  const double r = std::sqrt(a * a + b * b + c * c);
  std::vector<double> dir(3);
  double norm = 0.0;
  do {
    for (auto& d : dir) d = s.normal();
    norm = std::sqrt(dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]);
  } while (norm < 1e-300);
  for (auto& d : dir) d /= norm;
  return exp_point(m, x, dir, r);
}

// log(rho / sinh(rho)).
double log_phi(double rho) {
  if (rho < 1e-4) return -rho * rho / 6.0;
  return std::log(rho) - rho - std::log1p(-std::exp(-2.0 * rho)) + std::log(2.0);
}

// Point at distance r along the geodesic from x to y, D = d(x, y).
Point geodesic_point(const Point& x, const Point& y, double D, double r) {
  if (D < 1e-12) return x;
  const double wx = std::sinh(D - r) / std::sinh(D);
  const double wy = std::sinh(r) / std::sinh(D);
  Point out{0.0, 0.0, 0.0, 0.0};
  for (int i = 1; i < 4; ++i) out.coords[i] = wx * x.coords[i] + wy * y.coords[i];
  out.coords[0] = std::sqrt(1.0 + out.coords[1] * out.coords[1] + out.coords[2] * out.coords[2] +
                            out.coords[3] * out.coords[3]);
  return out;
}

void check_bridge_support(const TransitionKernel& k) {
  const ManifoldModel& m = k.model();
  if (k.kind() == KernelKind::Cauchy) throw DomainError("bridges are not supported for the Cauchy kernel");
  if (m.is<model::DirichletInterval>() || m.is<model::Compactified>()) {
    throw DomainError("bridges on killed (Dirichlet) models are not supported");
  }
}

// Euclidean bridge on the grid from a to b (coordinatewise, variance 2 per unit time).
std::vector<Point> euclidean_bridge(const Point& a, const Point& b, const TimeGrid& grid,
                                    SampleStream& s) {
  const double T = grid.horizon();
  const std::size_t n = grid.n_steps();
  std::vector<Point> pts;
  pts.reserve(n + 1);
  pts.push_back(a);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double remaining = T - grid[j];
    const double dt = grid[j + 1] - grid[j];
    const double frac = dt / remaining;
    const double sd = std::sqrt(2.0 * dt * (T - grid[j + 1]) / remaining);
    Point next = pts.back();
    for (std::size_t i = 0; i < next.coords.size(); ++i) {
      next.coords[i] += frac * (b.coords[i] - next.coords[i]) + sd * s.normal();
    }
    pts.push_back(std::move(next));
  }
  pts.push_back(b);
  return pts;
}

// Lattice index k in [-K, K] drawn with probability proportional to
// exp(-(delta + k L)^2 / 4T).
long long draw_winding(double delta, double period, double T, SampleStream& s) {
  const double width = std::sqrt(4.0 * T * 45.0);
  const long long K = static_cast<long long>(std::ceil(width / period)) + 1;
  std::vector<double> w;
  w.reserve(2 * K + 1);
  double total = 0.0;
  for (long long k = -K; k <= K; ++k) {
    const double d = delta + static_cast<double>(k) * period;
    w.push_back(std::exp(-d * d / (4.0 * T)));
    total += w.back();
  }
  const double u = s.uniform() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += w[i];
    if (u < acc) return static_cast<long long>(i) - K;
  }
  return K;
}

}  // namespace

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
  if (times_.size() < 2) throw DomainError("time grid needs at least one step");
  if (times_.front() != 0.0) throw DomainError("time grid must start at 0");
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1]) || !std::isfinite(times_[i])) {
      throw DomainError("time grid must be strictly increasing");
    }
  }
}

TimeGrid TimeGrid::uniform(double horizon, std::size_t n_steps) {
  if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
  if (n_steps < 1) throw DomainError("grid needs at least one step");
  std::vector<double> t(n_steps + 1);
  for (std::size_t i = 0; i <= n_steps; ++i) {
    t[i] = horizon * static_cast<double>(i) / static_cast<double>(n_steps);
  }
  t.back() = horizon;
  return TimeGrid(std::move(t));
}

Point sample_step(const TransitionKernel& k, const Point& x, double dt, SampleStream& s) {
  if (x.cemetery) return x;
  const ManifoldModel& m = k.model();
  if (k.kind() == KernelKind::Cauchy) {
    return Point{x.coords[0] + dt * std::tan(kPi * (s.uniform() - 0.5))};
  }
  if (m.is<model::Euclidean>()) {
    const double sd = std::sqrt(2.0 * dt);
    Point y = x;
    for (auto& c : y.coords) c += sd * s.normal();
    return y;
  }
  if (m.is_periodic()) {
    const double sd = std::sqrt(2.0 * dt);
    const auto per = m.periods();
    Point y = x;
    for (std::size_t i = 0; i < per.size(); ++i) y.coords[i] = wrap(y.coords[i] + sd * s.normal(), per[i]);
    return y;
  }
  if (m.is<model::Hyperbolic3>()) return hyperbolic_step(m, x, dt, s);
  if (m.is<model::DirichletInterval>()) {
    throw DomainError("killed paths need the compactified model (compactified:dirichlet:L)");
  }
  // Compactified Dirichlet interval: thin the free Gaussian step by p^D / p^free <= 1.
  const double len = m.interior().as<model::DirichletInterval>().length;
  const double z = x.coords[0] + std::sqrt(2.0 * dt) * s.normal();
  const double u = s.uniform();
  if (!(z > 0.0 && z < len)) return Point::cemetery_point();
  const double d = z - x.coords[0];
  const double free = std::exp(-d * d / (4.0 * dt)) / std::sqrt(4.0 * kPi * dt);
  const double killed = dirichlet_kernel(dt, x.coords[0], z, len, k.policy());
  if (u * free < killed) return Point{z};
  return Point::cemetery_point();
}

Path sample_path(const TransitionKernel& k, const Point& x0, const TimeGrid& grid,
                 const RngContract& rng) {
  if (x0.cemetery) throw DomainError("paths start at an interior point");
  validate_point(k.model(), x0);
  SampleStream s(rng);
  Path p{grid, {}, std::nullopt};
  p.points.reserve(grid.n_steps() + 1);
  p.points.push_back(x0);
  for (std::size_t j = 0; j < grid.n_steps(); ++j) {
    Point next = sample_step(k, p.points.back(), grid[j + 1] - grid[j], s);
    if (next.cemetery && !p.kill_index) p.kill_index = j + 1;
    p.points.push_back(std::move(next));
  }
  return p;
}

BridgeDraw sample_bridge_detailed(const TransitionKernel& k, const Point& x0, const Point& y0,
                                  const TimeGrid& grid, const RngContract& rng,
                                  SamplerStats* stats) {
  check_bridge_support(k);
  if (x0.cemetery || y0.cemetery) throw DomainError("bridge endpoints must be interior points");
  const ManifoldModel& m = k.model();
  validate_point(m, x0);
  validate_point(m, y0);
  SampleStream s(rng);
  BridgeDraw out{Path{grid, {}, std::nullopt}, {}};

  if (m.is<model::Euclidean>()) {
    out.path.points = euclidean_bridge(x0, y0, grid, s);
    return out;
  }
  if (m.is_periodic()) {
    // W_{x0}^{y0} = sum over deck elements of projected Euclidean bridges to
    // the translates of a lift of y0, weighted by the free kernel.
    const auto cov = CoveringDescriptor::of(m);
    const Point x_lift = x0;
    Point y_lift = lift_point_near(cov, y0, x_lift);
    out.winding.resize(cov.periods.size());
    for (std::size_t i = 0; i < cov.periods.size(); ++i) {
      const double delta = y_lift.coords[i] - x_lift.coords[i];
      out.winding[i] = draw_winding(delta, cov.periods[i], grid.horizon(), s);
      y_lift.coords[i] += static_cast<double>(out.winding[i]) * cov.periods[i];
    }
    auto lifted = euclidean_bridge(x_lift, y_lift, grid, s);
    out.path.points.reserve(lifted.size());
    for (const auto& p : lifted) out.path.points.push_back(project_point(cov, p));
    out.path.points.back() = y0;
    return out;
  }

  // H3: step density f(z) proportional to p_dt(x, z) p_s(z, y0) with s = T - t_{j+1}.
  // Proposal: heat kernel p_tau(m, z) around the point m at fraction dt / (dt + s)
  // of the geodesic from x to y0, tau = dt s / (dt + s). Writing p_t = c_t phi(rho)
  // exp(-rho^2 / 4t) with phi(rho) = rho / sinh(rho), the CAT(0) inequality
  //   rho_m^2 / tau <= rho_x^2 / dt + rho_y^2 / s - D^2 / (dt + s)
  // bounds the Gaussian part of f / q by exp(-D^2 / 4(dt + s)), and
  // phi(rho_x) phi(rho_y) / phi(rho_m) <= e^{min(a, b)} with a = d(x, m), b = d(m, y0).
  const double T = grid.horizon();
  out.path.points.reserve(grid.n_steps() + 1);
  out.path.points.push_back(x0);
  for (std::size_t j = 0; j + 1 < grid.n_steps(); ++j) {
    const double dt = grid[j + 1] - grid[j];
    const double rest = T - grid[j + 1];
    const double tau = dt * rest / (dt + rest);
    const Point& x = out.path.points.back();
    const double D = distance(m, x, y0);
    const double a = D * dt / (dt + rest);
    const Point mid = geodesic_point(x, y0, D, a);
    const double log_envelope = std::min(a, D - a) - D * D / (4.0 * (dt + rest));
    bool done = false;
    for (int attempt = 0; attempt < kRejectionBudget; ++attempt) {
      Point z = hyperbolic_step(m, mid, tau, s);
      const double rx = distance(m, x, z);
      const double ry = distance(m, z, y0);
      const double rm = distance(m, mid, z);
      const double log_ratio = log_phi(rx) + log_phi(ry) - log_phi(rm) - rx * rx / (4.0 * dt) -
                               ry * ry / (4.0 * rest) + rm * rm / (4.0 * tau);
      const double log_accept = log_ratio - log_envelope;
      if (log_accept > 1e-9) throw NumericError("hyperbolic bridge envelope violated");
      if (stats) ++stats->proposals;
      if (s.uniform() < std::exp(std::min(0.0, log_accept))) {
        if (stats) ++stats->accepted;
        out.path.points.push_back(std::move(z));
        done = true;
        break;
      }
    }
    if (!done) {
      throw NumericError("hyperbolic bridge step exceeded the rejection budget of " +
                         std::to_string(kRejectionBudget) + " attempts at grid index " +
                         std::to_string(j + 1));
    }
  }
  out.path.points.push_back(y0);
  return out;
}

Path sample_bridge(const TransitionKernel& k, const Point& x0, const Point& y0,
                   const TimeGrid& grid, const RngContract& rng, SamplerStats* stats) {
  return sample_bridge_detailed(k, x0, y0, grid, rng, stats).path;
}

double bridge_total_mass(const TransitionKernel& k, const Point& x0, const Point& y0, double T) {
  return eval(k, T, y0, x0);
}

std::vector<double> circle_winding_probabilities(double period, double x0, double y0, double T,
                                                 int W) {
  const auto cov = CoveringDescriptor::of(ManifoldModel::circle(period));
  const double y_lift = lift_point_near(cov, Point{y0}, Point{x0}).coords[0];
  const TruncationPolicy policy;
  const double total = theta_kernel_1d(T, y_lift - x0, period, policy);
  std::vector<double> probs;
  for (int k = -W; k <= W; ++k) {
    const double d = y_lift + k * period - x0;
    probs.push_back(std::exp(-d * d / (4.0 * T)) / std::sqrt(4.0 * kPi * T) / total);
  }
  return probs;
}

Path project_path(const CoveringDescriptor& cov, const Path& lifted) {
  Path out{lifted.grid, {}, std::nullopt};
  if (lifted.killed()) throw DomainError("cannot project a killed path");
  out.points.reserve(lifted.points.size());
  for (const auto& p : lifted.points) out.points.push_back(project_point(cov, p));
  return out;
}

Path lift_path(const CoveringDescriptor& cov, const Path& base, const Point& lifted_start) {
  if (base.killed()) throw DomainError("cannot lift a killed path");
  const Point start_base = project_point(cov, lifted_start);
  const double tol = 1e-12 * std::max(1.0, std::abs(*std::max_element(lifted_start.coords.begin(), lifted_start.coords.end(),
                                                              [](double a, double b) { return std::abs(a) < std::abs(b); })));
  if (!(distance(cov.base, start_base, base.points.front()) <= tol)) {
    throw DomainError("lift start does not project to the first path point");
  }
  const double half = 0.5 * *std::min_element(cov.periods.begin(), cov.periods.end());
  Path out{base.grid, {}, std::nullopt};
  out.points.reserve(base.points.size());
  out.points.push_back(lifted_start);
  for (std::size_t j = 1; j < base.points.size(); ++j) {
    if (!(distance(cov.base, base.points[j - 1], base.points[j]) < half)) {
      throw DomainError("base step " + std::to_string(j) +
                        " is not shorter than half the shortest period; lift is ambiguous");
    }
    out.points.push_back(lift_point_near(cov, base.points[j], out.points.back()));
  }
  return out;
}

}  // namespace pathkernel
