#include "pathkernel/io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace pathkernel::io {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_path_csv(std::ostream& os, const ManifoldModel& model, const Path& path) {
  const int nc = model.interior().coord_count();
  os << "t";
  for (int c = 0; c < nc; ++c) os << ",coord" << c;
  os << ",killed\n";
  for (std::size_t j = 0; j < path.points.size(); ++j) {
    const Point& p = path.points[j];
    os << format_number(path.grid[j]);
    for (int c = 0; c < nc; ++c) {
      os << ',' << (p.cemetery ? std::string("nan") : format_number(p.coords[c]));
    }
    os << ',' << (p.cemetery ? 1 : 0) << '\n';
  }
}

void write_curve_csv(std::ostream& os, const std::vector<CurveRow>& rows) {
  os << "t,analytic,mc,mc_stderr\n";
  for (const auto& r : rows) {
    os << format_number(r.t) << ',' << format_number(r.analytic) << ','
       << format_number(r.mc.value) << ',' << format_number(r.mc.std_error) << '\n';
  }
}

nlohmann::ordered_json estimate_json(const EstimateWithError& e, std::size_t n_steps,
                                     std::optional<double> oracle) {
  nlohmann::ordered_json j;
  j["value"] = e.value;
  j["std_error"] = e.std_error;
  j["n_samples"] = e.n_samples;
  j["n_steps"] = n_steps;
  j["seed"] = e.seed;
  if (oracle) j["oracle"] = *oracle;
  return j;
}

namespace {

void dump_into(std::ostringstream& os, const nlohmann::ordered_json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  if (j.is_object()) {
    if (j.empty()) {
      os << "{}";
      return;
    }
    os << "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) os << ",\n";
      first = false;
      os << pad << nlohmann::json(it.key()).dump() << ": ";
      dump_into(os, it.value(), indent, depth + 1);
    }
    os << '\n' << close_pad << '}';
  } else if (j.is_array()) {
    os << '[';
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) os << ", ";
      dump_into(os, j[i], indent, depth + 1);
    }
    os << ']';
  } else if (j.is_number_float()) {
    const double v = j.get<double>();
    if (std::isfinite(v)) {
      std::string s = format_number(v);
      if (s.find_first_of(".eE") == std::string::npos) s += ".0";
      os << s;
    } else {
      os << "null";
    }
  } else {
    os << j.dump();
  }
}

}  // namespace

std::string dump_json(const nlohmann::ordered_json& j) {
  std::ostringstream os;
  dump_into(os, j, 2, 0);
  os << '\n';
  return os.str();
}

}  // namespace pathkernel::io
