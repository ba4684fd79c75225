#pragma once

#include <vector>

#include "pathkernel/estimate.hpp"
#include "pathkernel/path_sampler.hpp"

namespace pathkernel {

/// Dyadic increment statistics xi_n = max_k rho(X_{k 2^-n T}, X_{(k-1) 2^-n T}).
struct HolderReport {
  std::vector<int> levels;
  std::vector<double> scales;          // dt = T 2^-n, decreasing
  std::vector<double> max_increments;  // median over paths of xi_n
  double fitted_exponent = 0.0;        // minus the slope of log2 xi_n against n
  double r_squared = 0.0;
};

/// Paths must live on a uniform grid of 2^max_level steps; coarser levels are
/// read off the same path. Cemetery-terminated paths are rejected.
HolderReport holder_exponent(const ManifoldModel& model, const std::vector<Path>& paths,
                             int min_level, int max_level);

/// Ensemble on a dyadic grid of 2^max_level steps over [0, T]. Euclidean heat
/// paths are built by Gaussian midpoint insertion so every level refines the
/// same path; other kernels are sampled directly at the finest level.
std::vector<Path> sample_dyadic_ensemble(const TransitionKernel& k, const Point& x0, double T,
                                         int max_level, std::size_t n_paths, std::uint64_t seed,
                                         unsigned workers = 1);

/// Closed-form E[rho(X_0, X_t)]: 2 Gamma((n+1)/2) / Gamma(n/2) sqrt(t) on R^n and
/// e^{-t} 2 pi^{-1/2} sqrt(t) + erf(sqrt(t)) (1 + 2t) on H3.
double expected_distance_analytic(const ManifoldModel& model, double t);

/// One-step Monte Carlo estimate of E[rho(x0, X_t)].
EstimateWithError expected_distance_mc(const TransitionKernel& k, const Point& x0, double t,
                                       std::size_t n_samples, std::uint64_t seed,
                                       unsigned workers = 1);

struct CurveRow {
  double t = 0.0;
  double analytic = 0.0;
  EstimateWithError mc;
};

std::vector<CurveRow> expected_distance_curve(const ManifoldModel& model,
                                              const std::vector<double>& times,
                                              std::size_t n_samples, std::uint64_t seed,
                                              unsigned workers = 1);

struct CompletenessReport {
  std::vector<double> times;
  std::vector<double> masses;
  std::vector<double> deficits;  // 1 - mass
  bool complete = true;
};

/// Mass by quadrature at each t; complete when every deficit is within tol.
CompletenessReport completeness_check(const TransitionKernel& k, const std::vector<double>& times,
                                      const Point& x0, double tol = 1e-8);

struct OccupationReport {
  std::vector<double> widths;
  std::vector<double> fractions;  // mean fraction of grid times with |w| < width / 2
};

/// Fraction of (non-initial) grid times a Euclidean(1) path from 0 spends in
/// an interval of the given width around the origin.
OccupationReport occupation_fractions(const std::vector<double>& widths, double T,
                                      std::size_t n_steps, std::size_t n_paths,
                                      std::uint64_t seed, unsigned workers = 1);

}  // namespace pathkernel
