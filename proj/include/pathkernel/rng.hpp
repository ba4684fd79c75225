#pragma once

#include <array>
#include <cstdint>

namespace pathkernel {

/// Identifies the random stream of one Monte Carlo sample.
struct RngContract {
  std::uint64_t master_seed = 0;
  std::uint64_t sample_index = 0;
};

/// SplitMix64 finalizer; used to derive stream keys and sub-seeds.
std::uint64_t mix64(std::uint64_t x);

/// Derive an independent master seed for a labelled sub-experiment.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t label);

/// Philox4x32-10 keyed by hash(master_seed, sample_index). The output depends
/// only on (key, counter), so a sample's stream is the same on any worker.
class SampleStream {
 public:
  using result_type = std::uint64_t;

  explicit SampleStream(const RngContract& rng);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()();

  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();

 private:
  void refill();

  std::array<std::uint32_t, 2> key_{};
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int next_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace pathkernel
