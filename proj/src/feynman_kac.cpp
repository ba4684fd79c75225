#include "pathkernel/feynman_kac.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "pathkernel/errors.hpp"
#include "pathkernel/parallel.hpp"

namespace pathkernel {

Potential::Potential(std::function<double(const Point&)> f, double sup_bound, std::string name)
    : f_(std::move(f)), sup_bound_(sup_bound), name_(std::move(name)) {
  if (!(sup_bound_ >= 0.0) || !std::isfinite(sup_bound_)) {
    throw DomainError("potential sup bound must be a finite nonnegative number");
  }
}

Potential Potential::zero() {
  return Potential([](const Point&) { return 0.0; }, 0.0, "zero");
}

Potential Potential::constant(double c) {
  std::ostringstream os;
  os.precision(17);
  os << "const:" << c;
  return Potential([c](const Point&) { return c; }, std::abs(c), os.str());
}

Potential Potential::cosine() {
  return Potential([](const Point& x) { return std::cos(x.coords[0]); }, 1.0, "cos");
}

Potential Potential::step(double a, double b, double value) {
  std::ostringstream os;
  os.precision(17);
  os << "step:" << a << "," << b << "," << value;
  return Potential(
      [a, b, value](const Point& x) {
        const double u = x.coords[0];
        return (u >= a && u < b) ? value : 0.0;
      },
      std::abs(value), os.str());
}

double Potential::operator()(const Point& x) const {
  const double v = f_(x);
  if (!(std::abs(v) <= sup_bound_)) {
    throw DomainError("potential " + name_ + " exceeds its declared sup bound");
  }
  return v;
}

Potential Potential::shifted(double c) const {
  auto f = f_;
  std::ostringstream os;
  os.precision(17);
  os << name_ << "+" << c;
  return Potential([f, c](const Point& x) { return f(x) + c; }, sup_bound_ + std::abs(c), os.str());
}

Potential Potential::pulled_back(const CoveringDescriptor& cov) const {
  auto f = f_;
  return Potential([f, cov](const Point& x) { return f(project_point(cov, x)); }, sup_bound_,
                   name_ + "@lift");
}

double riemann_action(const Path& path, const Potential& V, RiemannRule rule) {
  const auto& t = path.grid.times();
  const std::size_t live_end = path.kill_index.value_or(path.points.size());
  // Neumaier-compensated sum, so V = c gives c t to within a rounding or two
  double action = 0.0, carry = 0.0;
  double prev = rule == RiemannRule::Trapezoid ? V(path.points[0]) : 0.0;
  for (std::size_t j = 1; j < live_end; ++j) {
    const double v = V(path.points[j]);
    const double dt = t[j] - t[j - 1];
    const double term = rule == RiemannRule::RightEndpoint ? dt * v : 0.5 * dt * (prev + v);
    const double next = action + term;
    carry += std::abs(action) >= std::abs(term) ? (action - next) + term : (term - next) + action;
    action = next;
    prev = v;
  }
  return action + carry;
}

namespace {

void check_counts(std::size_t n_steps, std::size_t n_samples, double t) {
  if (n_steps < 1) throw DomainError("n_steps must be >= 1");
  if (n_samples < 1) throw DomainError("n_samples must be >= 1");
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("time must be positive and finite");
}

}  // namespace

std::vector<double> fk_weights(const FKProblem& prob) {
  check_counts(prob.n_steps, prob.n_samples, prob.t);
  validate_point(prob.kernel.model(), prob.x0);
  const TimeGrid grid = TimeGrid::uniform(prob.t, prob.n_steps);
  const double bound = std::exp(prob.t * prob.V.sup_bound());
  std::vector<double> w(prob.n_samples);
  parallel_for(prob.n_samples, resolve_workers(prob.workers), [&](std::size_t i) {
    const Path p = sample_path(prob.kernel, prob.x0, grid, RngContract{prob.seed, i});
    if (p.killed()) {
      w[i] = 0.0;  // g(cemetery) = 0
      return;
    }
    const double g = prob.g(p.end());
    const double weight = g * std::exp(-riemann_action(p, prob.V, prob.rule));
    if (std::abs(weight) > bound * std::abs(g) * (1.0 + 1e-12)) {
      throw NumericError("Feynman-Kac weight exceeds exp(t |V|_inf) |g|");
    }
    w[i] = weight;
  });
  return w;
}

EstimateWithError fk_expectation(const FKProblem& prob) {
  const auto w = fk_weights(prob);
  return summarize(w, prob.seed);
}

std::vector<double> fk_bridge_weights(const FKKernelProblem& prob) {
  check_counts(prob.n_steps, prob.n_samples, prob.t);
  const TimeGrid grid = TimeGrid::uniform(prob.t, prob.n_steps);
  std::vector<double> w(prob.n_samples);
  parallel_for(prob.n_samples, resolve_workers(prob.workers), [&](std::size_t i) {
    const Path p = sample_bridge(prob.kernel, prob.x0, prob.y0, grid, RngContract{prob.seed, i});
    w[i] = std::exp(-riemann_action(p, prob.V, prob.rule));
  });
  return w;
}

EstimateWithError fk_kernel(const FKKernelProblem& prob) {
  const auto w = fk_bridge_weights(prob);
  const double mass = bridge_total_mass(prob.kernel, prob.x0, prob.y0, prob.t);
  EstimateWithError e = summarize(w, prob.seed);
  e.value *= mass;
  e.std_error *= mass;
  return e;
}

MonotonicityReport fk_monotonicity_check(const TransitionKernel& kernel, const Potential& V1,
                                         const Potential& V2, const Point& x0,
                                         const std::variant<Point, TerminalFunction>& target,
                                         double t, std::size_t n_steps, std::size_t n_samples,
                                         std::uint64_t seed, unsigned workers) {
  check_counts(n_steps, n_samples, t);
  validate_point(kernel.model(), x0);
  const TimeGrid grid = TimeGrid::uniform(t, n_steps);
  const Point* y0 = std::get_if<Point>(&target);
  const double mass = y0 ? bridge_total_mass(kernel, x0, *y0, t) : 1.0;

  MonotonicityReport rep;
  rep.weights_first.resize(n_samples);
  rep.weights_second.resize(n_samples);
  parallel_for(n_samples, resolve_workers(workers), [&](std::size_t i) {
    const RngContract rng{seed, i};
    const Path p = y0 ? sample_bridge(kernel, x0, *y0, grid, rng) : sample_path(kernel, x0, grid, rng);
    const std::size_t live_end = p.kill_index.value_or(p.points.size());
    for (std::size_t j = 0; j < live_end; ++j) {
      if (V1(p.points[j]) > V2(p.points[j])) {
        throw DomainError("V1 <= V2 violated at a visited point");
      }
    }
    double factor = mass;
    if (!y0) factor = p.killed() ? 0.0 : std::get<TerminalFunction>(target)(p.end());
    rep.weights_first[i] = factor * std::exp(-riemann_action(p, V1, RiemannRule::RightEndpoint));
    rep.weights_second[i] = factor * std::exp(-riemann_action(p, V2, RiemannRule::RightEndpoint));
  });
  for (std::size_t i = 0; i < n_samples; ++i) {
    // for signed terminal data the ordering flips with the sign of g
    const double a = rep.weights_first[i], b = rep.weights_second[i];
    const bool ok = (a >= 0.0 || b >= 0.0) ? a >= b : a <= b;
    if (!ok) ++rep.violations;
  }
  rep.pathwise = rep.violations == 0;
  rep.first = summarize(rep.weights_first, seed);
  rep.second = summarize(rep.weights_second, seed);
  return rep;
}

CoveringSumReport fk_covering_sum_check(const CoveringDescriptor& cov, const Potential& V_base,
                                        const Point& x0, const Point& y0, double t, int windings,
                                        std::size_t n_steps, std::size_t n_samples,
                                        std::uint64_t seed, unsigned workers) {
  if (windings < 0) throw DomainError("winding truncation must be >= 0");
  validate_point(cov.base, x0);
  validate_point(cov.base, y0);
  const TransitionKernel base_kernel(cov.base);
  const TransitionKernel lifted_kernel(cov.total);
  const Potential V_lift = V_base.pulled_back(cov);

  CoveringSumReport rep;
  rep.base = fk_kernel(FKKernelProblem{base_kernel, V_base, x0, y0, t, n_steps, n_samples,
                                       derive_seed(seed, 0), workers});

  const Point x_lift = x0;
  const Point y_lift = lift_point_near(cov, y0, x_lift);
  const std::size_t dim = cov.periods.size();
  std::vector<long long> k(dim, -windings);
  double variance = rep.base.std_error * rep.base.std_error;
  std::uint64_t label = 1;
  for (;;) {
    Point target = y_lift;
    for (std::size_t i = 0; i < dim; ++i) target.coords[i] += static_cast<double>(k[i]) * cov.periods[i];
    const auto e = fk_kernel(FKKernelProblem{lifted_kernel, V_lift, x_lift, target, t, n_steps,
                                             n_samples, derive_seed(seed, label++), workers});
    rep.lifted.push_back(e);
    rep.deck.push_back(k);
    rep.lifted_sum += e.value;
    variance += e.std_error * e.std_error;
    std::size_t i = 0;
    while (i < dim && k[i] == windings) k[i++] = -windings;
    if (i == dim) break;
    ++k[i];
  }

  // omitted deck elements: full theta product minus the truncated Gaussian product
  double full = 1.0, kept = 1.0;
  for (std::size_t i = 0; i < dim; ++i) {
    const double d = y_lift.coords[i] - x_lift.coords[i];
    full *= theta_kernel_1d(t, d, cov.periods[i], base_kernel.policy());
    double part = 0.0;
    for (int j = -windings; j <= windings; ++j) {
      const double dj = d + j * cov.periods[i];
      part += std::exp(-dj * dj / (4.0 * t)) / std::sqrt(4.0 * std::numbers::pi * t);
    }
    kept *= part;
  }
  rep.tail_bound = std::exp(t * V_base.sup_bound()) * std::max(0.0, full - kept) +
                   base_kernel.policy().tail_tolerance;
  rep.sigma = std::sqrt(variance);
  rep.residual = std::abs(rep.base.value - rep.lifted_sum);
  rep.pass = rep.residual <= 3.0 * rep.sigma + rep.tail_bound;
  return rep;
}

}  // namespace pathkernel
