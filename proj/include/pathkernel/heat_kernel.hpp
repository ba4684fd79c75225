#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pathkernel/manifold.hpp"

namespace pathkernel {

/// Truncation rule for lattice (theta) and eigen-series kernels.
struct TruncationPolicy {
  double tail_tolerance = 1e-12;
  long long max_terms = 1'000'000;
};

enum class KernelKind { Heat, Cauchy };

/// Substochastic transition density p_t(x, y) of e^{t Delta} on a model space
/// (or the Cauchy density on the line). Immutable.
class TransitionKernel {
 public:
  explicit TransitionKernel(ManifoldModel model, KernelKind kind = KernelKind::Heat,
                            TruncationPolicy policy = {});

  static TransitionKernel cauchy(TruncationPolicy policy = {}) {
    return TransitionKernel(ManifoldModel::euclidean(1), KernelKind::Cauchy, policy);
  }

  const ManifoldModel& model() const { return model_; }
  KernelKind kind() const { return kind_; }
  const TruncationPolicy& policy() const { return policy_; }
  std::string name() const;

 private:
  ManifoldModel model_;
  KernelKind kind_;
  TruncationPolicy policy_;
};

/// p_t(x, y) for interior points. Symmetric in (x, y).
double eval(const TransitionKernel& k, double t, const Point& x, const Point& y);

/// Radial profile of the H3 heat kernel as a function of geodesic distance.
double hyperbolic3_kernel(double t, double rho);

/// Theta sum sum_k g_t(d + kL) of 1D Gaussians over a period L.
double theta_kernel_1d(double t, double d, double period, const TruncationPolicy& policy);

/// Dirichlet heat kernel on (0, L); images for t < L^2/pi^2, sine series otherwise.
double dirichlet_kernel(double t, double x, double y, double length, const TruncationPolicy& policy);
double dirichlet_kernel_images(double t, double x, double y, double length,
                               const TruncationPolicy& policy);
double dirichlet_kernel_series(double t, double x, double y, double length,
                               const TruncationPolicy& policy);

/// Kernel on a Compactified model, x the destination, y the source; either
/// may be the cemetery.
double eval_compactified(const TransitionKernel& k, double t, const Point& x, const Point& y);

/// Integral of y -> p_t(x, y) against the volume measure (including the
/// cemetery atom on Compactified models). Closed form 1 where the model is
/// stochastically complete; adaptive quadrature on the Dirichlet interval.
double total_mass(const TransitionKernel& k, double t, const Point& x,
                  double quad_tol = 1e-12);

/// Mass by quadrature for every model, never the closed form.
double mass_by_quadrature(const TransitionKernel& k, double t, const Point& x,
                          double quad_tol = 1e-12);

/// |int p_t(z, y) p_s(y, x) dmu(y) - p_{t+s}(z, x)|.
double chapman_kolmogorov_residual(const TransitionKernel& k, double s, double t, const Point& x,
                                   const Point& z, double quad_tol = 1e-12);

/// int u(z) p_t(z, y) dmu(z) for a one-dimensional or radial model.
double smooth_against_kernel(const TransitionKernel& k, double t, const Point& y,
                             const std::function<double(const Point&)>& u,
                             double quad_tol = 1e-12);

enum class MomentMode { Integrated, Pointwise };

struct MomentCheckConfig {
  double a = 4.0;
  double b = 1.0;
  std::vector<double> tau_grid;
  MomentMode mode = MomentMode::Integrated;
  double quad_tol = 1e-12;
};

struct MomentCheckResult {
  std::vector<double> ratios;
  double worst_constant = 0.0;
};

/// Integrated: int rho(z,y)^a p_tau(z,y) dmu(z) / tau^{1+b}.
/// Pointwise:  sup_z rho(z,y)^a p_tau(z,y) / tau^{1+b}.
/// Throws DivergenceError when the integral or supremum is infinite.
MomentCheckResult moment_check(const TransitionKernel& k, const MomentCheckConfig& cfg);

}  // namespace pathkernel
