#pragma once

#include <functional>

namespace pathkernel::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;  // accumulated |S2 - S1| / 15 estimate
  bool converged = true;
};

/// Adaptive Simpson with Richardson correction on [a, b], starting from
/// `panels` equal subintervals so narrow features are not skipped.
Result simpson(const std::function<double(double)>& f, double a, double b, double tol,
               int panels = 16, int max_depth = 48);

/// Integral over the real line through y = center + scale * tan(theta).
/// For integrands with algebraic tails.
Result real_line(const std::function<double(double)>& f, double center, double scale, double tol,
                 int panels = 64);

/// Same as simpson() but throws NumericError when the tolerance was not met.
double simpson_or_throw(const std::function<double(double)>& f, double a, double b, double tol,
                        int panels = 16);

/// Maximum of a unimodal-after-scan function on [a, b]: coarse scan on
/// `grid` points, then golden-section refinement around the best cell.
struct Maximum {
  double argmax = 0.0;
  double value = 0.0;
};
Maximum maximize(const std::function<double(double)>& f, double a, double b, int grid = 2048,
                 double xtol = 1e-13);

}  // namespace pathkernel::quad
