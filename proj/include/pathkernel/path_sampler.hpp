#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pathkernel/heat_kernel.hpp"
#include "pathkernel/rng.hpp"

namespace pathkernel {

class TimeGrid {
 public:
  /// times[0] must be 0 and the sequence strictly increasing with >= 2 entries.
  explicit TimeGrid(std::vector<double> times);
  static TimeGrid uniform(double horizon, std::size_t n_steps);

  const std::vector<double>& times() const { return times_; }
  double horizon() const { return times_.back(); }
  std::size_t n_steps() const { return times_.size() - 1; }
  double operator[](std::size_t i) const { return times_[i]; }

 private:
  std::vector<double> times_;
};

/// Grid skeleton of a continuous path. After kill_index every point is the
/// cemetery.
struct Path {
  TimeGrid grid;
  std::vector<Point> points;
  std::optional<std::size_t> kill_index;

  bool killed() const { return kill_index.has_value(); }
  const Point& end() const { return points.back(); }
};

/// Rejection counters for the samplers that use acceptance steps.
struct SamplerStats {
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;
};

/// Attempts allowed per step before a rejection sampler gives up.
inline constexpr int kRejectionBudget = 10'000;

/// One Markov step of length dt from x. Killing steps return the cemetery.
Point sample_step(const TransitionKernel& k, const Point& x, double dt, SampleStream& stream);

/// Sequential sampling from the finite-dimensional law of the Wiener measure.
Path sample_path(const TransitionKernel& k, const Point& x0, const TimeGrid& grid,
                 const RngContract& rng);

struct BridgeDraw {
  Path path;
  /// Deck element chosen by the winding decomposition (periodic models only).
  std::vector<long long> winding;
};

/// Sample from the normalized conditional Wiener measure from x0 to y0.
Path sample_bridge(const TransitionKernel& k, const Point& x0, const Point& y0,
                   const TimeGrid& grid, const RngContract& rng, SamplerStats* stats = nullptr);
BridgeDraw sample_bridge_detailed(const TransitionKernel& k, const Point& x0, const Point& y0,
                                  const TimeGrid& grid, const RngContract& rng,
                                  SamplerStats* stats = nullptr);

/// Total mass of the conditional Wiener measure, p_T(y0, x0).
double bridge_total_mass(const TransitionKernel& k, const Point& x0, const Point& y0, double T);

/// Winding weights p~_T(x~0, y~0 + k L) / sum_j p~_T(x~0, y~0 + j L) on a circle,
/// for k in [-W, W], with y~0 the lift of y0 nearest x~0 = x0.
std::vector<double> circle_winding_probabilities(double period, double x0, double y0, double T,
                                                 int W);

Path project_path(const CoveringDescriptor& cov, const Path& lifted);

/// Lift along the grid starting at lifted_start; every base step must be
/// shorter than half the shortest period or DomainError is thrown.
Path lift_path(const CoveringDescriptor& cov, const Path& base, const Point& lifted_start);

}  // namespace pathkernel
