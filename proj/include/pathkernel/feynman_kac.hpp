#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "pathkernel/estimate.hpp"
#include "pathkernel/path_sampler.hpp"

namespace pathkernel {

/// Bounded potential V with its declared sup norm. Every evaluation is
/// checked against the bound.
class Potential {
 public:
  Potential(std::function<double(const Point&)> f, double sup_bound, std::string name = "custom");

  static Potential zero();
  static Potential constant(double c);
  /// cos of the first coordinate.
  static Potential cosine();
  /// value on [a, b) of the first coordinate, zero elsewhere.
  static Potential step(double a, double b, double value);

  double operator()(const Point& x) const;
  double sup_bound() const { return sup_bound_; }
  const std::string& name() const { return name_; }

  /// V + c, with sup bound |c| larger.
  Potential shifted(double c) const;
  /// V composed with a covering projection.
  Potential pulled_back(const CoveringDescriptor& cov) const;

 private:
  std::function<double(const Point&)> f_;
  double sup_bound_;
  std::string name_;
};

using TerminalFunction = std::function<double(const Point&)>;

enum class RiemannRule { RightEndpoint, Trapezoid };

struct FKProblem {
  TransitionKernel kernel;
  Potential V;
  TerminalFunction g;
  Point x0;
  double t = 1.0;
  std::size_t n_steps = 64;
  std::size_t n_samples = 10'000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  RiemannRule rule = RiemannRule::RightEndpoint;
};

/// (t/n) sum_{j=1}^n V(w(t_j)) (or the trapezoid variant) over the live part
/// of the path.
double riemann_action(const Path& path, const Potential& V, RiemannRule rule);

/// Per-sample weights g(w(t)) exp(-action); killed paths weigh 0.
std::vector<double> fk_weights(const FKProblem& prob);

/// Monte Carlo estimate of (e^{t(Delta - V)} g)(x0).
EstimateWithError fk_expectation(const FKProblem& prob);

struct FKKernelProblem {
  TransitionKernel kernel;
  Potential V;
  Point x0;
  Point y0;
  double t = 1.0;
  std::size_t n_steps = 64;
  std::size_t n_samples = 10'000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  RiemannRule rule = RiemannRule::RightEndpoint;
};

/// Bridge weights exp(-action) under the normalized bridge law.
std::vector<double> fk_bridge_weights(const FKKernelProblem& prob);

/// Schroedinger kernel q_t(x0, y0): normalized-bridge average of exp(-action)
/// scaled by p_t(y0, x0).
EstimateWithError fk_kernel(const FKKernelProblem& prob);

struct MonotonicityReport {
  bool pathwise = true;         // every sample satisfies weight1 >= weight2
  std::size_t violations = 0;
  EstimateWithError first;      // estimate with V1
  EstimateWithError second;     // estimate with V2
  std::vector<double> weights_first;
  std::vector<double> weights_second;
};

/// Common-random-number comparison of two potentials V1 <= V2 on identical
/// paths. `target` is either a bridge endpoint (kernel mode) or terminal data.
/// Throws DomainError if V1 > V2 at any visited point.
MonotonicityReport fk_monotonicity_check(const TransitionKernel& kernel, const Potential& V1,
                                         const Potential& V2, const Point& x0,
                                         const std::variant<Point, TerminalFunction>& target,
                                         double t, std::size_t n_steps, std::size_t n_samples,
                                         std::uint64_t seed, unsigned workers = 1);

struct CoveringSumReport {
  EstimateWithError base;                   // q_t on the quotient
  std::vector<EstimateWithError> lifted;    // q~_t(x~0, y~0 + k L), k in [-W, W]^n
  std::vector<std::vector<long long>> deck; // matching lattice coefficients
  double lifted_sum = 0.0;
  double residual = 0.0;
  double sigma = 0.0;                       // combined Monte Carlo standard error
  double tail_bound = 0.0;                  // bound on omitted deck elements
  bool pass = false;
};

CoveringSumReport fk_covering_sum_check(const CoveringDescriptor& cov, const Potential& V_base,
                                        const Point& x0, const Point& y0, double t, int windings,
                                        std::size_t n_steps, std::size_t n_samples,
                                        std::uint64_t seed, unsigned workers = 1);

}  // namespace pathkernel
