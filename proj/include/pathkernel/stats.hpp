#pragma once

#include <functional>
#include <span>
#include <vector>

namespace pathkernel::stats {

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double critical = 0.0;  // upper quantile at the requested level
  bool pass = false;
};

/// Pearson goodness of fit; probabilities are renormalized to sum 1 and
/// dof = bins - 1.
ChiSquareResult chi_square(std::span<const long long> counts, std::span<const double> probs,
                           double level = 0.01);

struct KsResult {
  double statistic = 0.0;
  double critical = 0.0;
  bool pass = false;
};

/// One-sample Kolmogorov-Smirnov against a continuous CDF (asymptotic critical value).
KsResult ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf,
                       double level = 0.01);

/// Two-sample Kolmogorov-Smirnov (asymptotic critical value).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b, double level = 0.01);

/// c(alpha) with P(sup |B| > c) = alpha for the Brownian bridge B.
double kolmogorov_critical(double level);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

double median(std::vector<double> v);

}  // namespace pathkernel::stats
