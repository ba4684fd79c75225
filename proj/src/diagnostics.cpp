#include "pathkernel/diagnostics.hpp"

#include <cmath>
#include <numbers>

#include "pathkernel/errors.hpp"
#include "pathkernel/parallel.hpp"
#include "pathkernel/stats.hpp"

namespace pathkernel {

HolderReport holder_exponent(const ManifoldModel& model, const std::vector<Path>& paths,
                             int min_level, int max_level) {
  if (max_level - min_level + 1 < 3) throw DomainError("Hoelder fit needs at least 3 levels");
  if (min_level < 0) throw DomainError("levels must be nonnegative");
  if (paths.empty()) throw DomainError("empty path ensemble");
  const std::size_t fine = std::size_t{1} << max_level;
  HolderReport rep;
  for (const auto& p : paths) {
    if (p.grid.n_steps() != fine) throw DomainError("path grid is not 2^max_level steps");
    if (p.killed()) throw DomainError("killed paths have no increment statistics");
  }
  const double T = paths.front().grid.horizon();
  for (int n = min_level; n <= max_level; ++n) {
    const std::size_t stride = fine >> n;
    std::vector<double> xi;
    xi.reserve(paths.size());
    for (const auto& p : paths) {
      double mx = 0.0;
      for (std::size_t k = stride; k <= fine; k += stride) {
        mx = std::max(mx, distance(model, p.points[k], p.points[k - stride]));
      }
      xi.push_back(mx);
    }
    rep.levels.push_back(n);
    rep.scales.push_back(T * std::ldexp(1.0, -n));
    rep.max_increments.push_back(stats::median(std::move(xi)));
  }
  std::vector<double> x, y;
  for (std::size_t i = 0; i < rep.levels.size(); ++i) {
    x.push_back(rep.levels[i]);
    y.push_back(std::log2(rep.max_increments[i]));
  }
  const auto fit = stats::least_squares(x, y);
  rep.fitted_exponent = -fit.slope;
  rep.r_squared = fit.r_squared;
  return rep;
}

std::vector<Path> sample_dyadic_ensemble(const TransitionKernel& k, const Point& x0, double T,
                                         int max_level, std::size_t n_paths, std::uint64_t seed,
                                         unsigned workers) {
  if (max_level < 1 || max_level > 24) throw DomainError("max_level must lie in [1, 24]");
  const std::size_t fine = std::size_t{1} << max_level;
  const TimeGrid grid = TimeGrid::uniform(T, fine);
  validate_point(k.model(), x0);
  std::vector<Path> out(n_paths, Path{grid, {}, std::nullopt});
  const bool bridge_refine = k.kind() == KernelKind::Heat && k.model().is<model::Euclidean>();
  parallel_for(n_paths, resolve_workers(workers), [&](std::size_t i) {
    const RngContract rng{seed, i};
    if (!bridge_refine) {
      out[i] = sample_path(k, x0, grid, rng);
      return;
    }
    SampleStream s(rng);
    std::vector<Point> pts(fine + 1, x0);
    const double sd_end = std::sqrt(2.0 * T);
    for (auto& c : pts[fine].coords) c += sd_end * s.normal();
    for (std::size_t half = fine / 2; half >= 1; half /= 2) {
      // midpoint of [a, b] given both ends: mean (a + b) / 2, variance 2 (b - a) / 4
      const double sd = std::sqrt(2.0 * (grid[2 * half] - grid[0]) / 4.0);
      for (std::size_t mid = half; mid < fine; mid += 2 * half) {
        for (std::size_t c = 0; c < x0.coords.size(); ++c) {
          pts[mid].coords[c] = 0.5 * (pts[mid - half].coords[c] + pts[mid + half].coords[c]) +
                               sd * s.normal();
        }
      }
    }
    out[i].points = std::move(pts);
  });
  return out;
}

double expected_distance_analytic(const ManifoldModel& model, double t) {
  if (!(t > 0.0)) throw DomainError("time must be positive");
  if (model.is<model::Euclidean>()) {
    const double n = model.dim();
    return 2.0 * std::exp(std::lgamma((n + 1.0) / 2.0) - std::lgamma(n / 2.0)) * std::sqrt(t);
  }
  if (model.is<model::Hyperbolic3>()) {
    const double st = std::sqrt(t);
    return std::exp(-t) * 2.0 / std::sqrt(std::numbers::pi) * st + std::erf(st) * (1.0 + 2.0 * t);
  }
  throw DomainError("closed-form expected distance is available for euclidean and hyperbolic3");
}

EstimateWithError expected_distance_mc(const TransitionKernel& k, const Point& x0, double t,
                                       std::size_t n_samples, std::uint64_t seed,
                                       unsigned workers) {
  const ManifoldModel& m = k.model();
  if (k.kind() != KernelKind::Heat ||
      !(m.is<model::Euclidean>() || m.is<model::Hyperbolic3>() || m.is_periodic())) {
    throw DomainError("expected distance needs a stochastically complete heat kernel");
  }
  if (!(t > 0.0)) throw DomainError("time must be positive");
  validate_point(m, x0);
  std::vector<double> d(n_samples);
  parallel_for(n_samples, resolve_workers(workers), [&](std::size_t i) {
    SampleStream s(RngContract{seed, i});
    d[i] = distance(m, x0, sample_step(k, x0, t, s));
  });
  return summarize(d, seed);
}

std::vector<CurveRow> expected_distance_curve(const ManifoldModel& model,
                                              const std::vector<double>& times,
                                              std::size_t n_samples, std::uint64_t seed,
                                              unsigned workers) {
  const TransitionKernel k(model);
  std::vector<CurveRow> rows;
  for (std::size_t i = 0; i < times.size(); ++i) {
    CurveRow r;
    r.t = times[i];
    r.analytic = expected_distance_analytic(model, times[i]);
    r.mc = expected_distance_mc(k, origin(model), times[i], n_samples, derive_seed(seed, i), workers);
    rows.push_back(r);
  }
  return rows;
}

CompletenessReport completeness_check(const TransitionKernel& k, const std::vector<double>& times,
                                      const Point& x0, double tol) {
  CompletenessReport rep;
  for (double t : times) {
    const double m = mass_by_quadrature(k, t, x0);
    rep.times.push_back(t);
    rep.masses.push_back(m);
    rep.deficits.push_back(1.0 - m);
    if (std::abs(1.0 - m) > tol) rep.complete = false;
  }
  return rep;
}

OccupationReport occupation_fractions(const std::vector<double>& widths, double T,
                                      std::size_t n_steps, std::size_t n_paths,
                                      std::uint64_t seed, unsigned workers) {
  const TransitionKernel k(ManifoldModel::euclidean(1));
  const TimeGrid grid = TimeGrid::uniform(T, n_steps);
  std::vector<std::vector<double>> per_path(n_paths);
  parallel_for(n_paths, resolve_workers(workers), [&](std::size_t i) {
    const Path p = sample_path(k, Point{0.0}, grid, RngContract{seed, i});
    per_path[i].assign(widths.size(), 0.0);
    for (std::size_t j = 1; j < p.points.size(); ++j) {
      for (std::size_t w = 0; w < widths.size(); ++w) {
        if (std::abs(p.points[j].coords[0]) < widths[w] / 2.0) per_path[i][w] += 1.0;
      }
    }
  });
  OccupationReport rep;
  rep.widths = widths;
  rep.fractions.assign(widths.size(), 0.0);
  for (const auto& f : per_path) {
    for (std::size_t w = 0; w < widths.size(); ++w) rep.fractions[w] += f[w];
  }
  for (auto& f : rep.fractions) f /= static_cast<double>(n_paths * n_steps);
  return rep;
}

}  // namespace pathkernel
