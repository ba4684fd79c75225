#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pathkernel/diagnostics.hpp"
#include "pathkernel/estimate.hpp"
#include "pathkernel/path_sampler.hpp"

namespace pathkernel::io {

/// 17 significant digits; round-trips every double.
std::string format_number(double v);

/// CSV rows `t,coord0[,coord1,...],killed`. Cemetery rows carry nan coordinates.
void write_path_csv(std::ostream& os, const ManifoldModel& model, const Path& path);

/// CSV rows `t,analytic,mc,mc_stderr`.
void write_curve_csv(std::ostream& os, const std::vector<CurveRow>& rows);

/// {"value","std_error","n_samples","n_steps","seed"[,"oracle"]}.
nlohmann::ordered_json estimate_json(const EstimateWithError& e, std::size_t n_steps,
                                     std::optional<double> oracle = std::nullopt);

/// Serialize JSON with every floating value printed at 17 significant digits.
std::string dump_json(const nlohmann::ordered_json& j);

}  // namespace pathkernel::io
