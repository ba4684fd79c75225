#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace pathkernel {

/// Monte Carlo mean with its standard error (sample sd / sqrt(n)).
struct EstimateWithError {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
};

/// Sequential two-pass reduction, so the result does not depend on how the
/// per-sample values were produced.
EstimateWithError summarize(std::span<const double> samples, std::uint64_t seed);

}  // namespace pathkernel
