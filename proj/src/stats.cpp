#include "pathkernel/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numeric>

#include "pathkernel/errors.hpp"
#include "pathkernel/estimate.hpp"

namespace pathkernel {

EstimateWithError summarize(std::span<const double> samples, std::uint64_t seed) {
  EstimateWithError e;
  e.n_samples = samples.size();
  e.seed = seed;
  if (samples.empty()) return e;
  double sum = 0.0;
  for (double v : samples) sum += v;
  const double n = static_cast<double>(samples.size());
  e.value = sum / n;
  if (samples.size() > 1) {
    double ss = 0.0;
    for (double v : samples) ss += (v - e.value) * (v - e.value);
    e.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return e;
}

}  // namespace pathkernel

namespace pathkernel::stats {

ChiSquareResult chi_square(std::span<const long long> counts, std::span<const double> probs,
                           double level) {
  if (counts.size() != probs.size() || counts.size() < 2) {
    throw DomainError("chi-square needs matching counts and probabilities over >= 2 bins");
  }
  const double n = static_cast<double>(std::accumulate(counts.begin(), counts.end(), 0LL));
  const double psum = std::accumulate(probs.begin(), probs.end(), 0.0);
  ChiSquareResult r;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double expected = n * probs[i] / psum;
    if (expected <= 0.0) throw DomainError("chi-square bin with zero expected count");
    const double d = static_cast<double>(counts[i]) - expected;
    r.statistic += d * d / expected;
  }
  r.dof = static_cast<int>(counts.size()) - 1;
  r.critical = boost::math::quantile(boost::math::complement(
      boost::math::chi_squared_distribution<double>(r.dof), level));
  r.pass = r.statistic <= r.critical;
  return r;
}

double kolmogorov_critical(double level) {
  // limiting law of sqrt(n) D_n: P(K > c) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 c^2)
  auto tail = [](double c) {
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) {
      s += (k % 2 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * c * c);
    }
    return 2.0 * s;
  };
  double lo = 0.3, hi = 3.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (tail(mid) > level ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

KsResult ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf,
                       double level) {
  if (sample.empty()) throw DomainError("empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  KsResult r;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double F = cdf(sample[i]);
    r.statistic = std::max({r.statistic, (i + 1) / n - F, F - i / n});
  }
  r.critical = kolmogorov_critical(level) / std::sqrt(n);
  r.pass = r.statistic <= r.critical;
  return r;
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b, double level) {
  if (a.empty() || b.empty()) throw DomainError("empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  KsResult r;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    r.statistic = std::max(r.statistic, std::abs(i / na - j / nb));
  }
  r.critical = kolmogorov_critical(level) * std::sqrt((na + nb) / (na * nb));
  r.pass = r.statistic <= r.critical;
  return r;
}

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("least squares needs >= 2 points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

double median(std::vector<double> v) {
  if (v.empty()) throw DomainError("median of empty sample");
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + mid);
  return 0.5 * (lo + hi);
}

}  // namespace pathkernel::stats
