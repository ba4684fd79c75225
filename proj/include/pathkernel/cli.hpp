#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pathkernel::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr std::uint64_t kDefaultSeed = 20240917;

/// Effective run configuration. Every field has a default, including the seed.
struct RunConfig {
  std::string command;  // kernel | mass | verify | sample | bridge | fk | curve | holder
  std::string mode;     // verify and fk sub-modes

  std::string model = "euclidean:1";
  std::string potential = "zero";
  std::string potential2;        // fk monotonicity; empty means potential + 0.5
  std::string terminal = "one";  // one | cos
  std::string rule = "right";    // right | trapezoid
  std::string moment_mode = "integrated";
  std::string tau_grid = "0.001,0.003,0.01,0.03,0.1";
  std::string t_grid = "0.25:7:0.25";
  std::vector<double> x;  // empty means the model origin
  std::vector<double> y;

  double t = 1.0;
  double s = 0.5;
  double a = 4.0;
  double b = 1.0;
  std::size_t steps = 64;
  std::size_t samples = 10'000;
  std::size_t index = 0;
  std::size_t paths = 200;
  int windings = 3;
  int min_level = 4;
  int max_level = 12;
  std::size_t oracle_m = 512;
  std::uint64_t seed = kDefaultSeed;

  std::string output;  // empty means stdout
  unsigned workers = 1;

  double tail_tolerance = 1e-12;
  long long max_terms = 1'000'000;
  double quad_tol = 1e-12;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws UsageError on unknown flags or invalid values. `--help` and
/// `--version` are reported through HelpRequested.
RunConfig parse_args(int argc, const char* const* argv);

struct HelpRequested {
  std::string text;
};

/// `key=value` pairs of the effective config, excluding output path and
/// worker count (neither changes the results).
std::string describe(const RunConfig& cfg);

/// Executes a parsed config. Returns 0 on success, 1 on numeric failure or a
/// failed verification, 2 on invalid input discovered while running.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// parse_args + run with exit-code mapping.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pathkernel::cli
