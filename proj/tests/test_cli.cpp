#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "pathkernel/cli.hpp"

using namespace pathkernel;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(std::vector<std::string> args) {
  args.insert(args.begin(), "pathkernel");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

// Body after the leading comment line.
nlohmann::json body(const std::string& text) {
  REQUIRE(text.rfind("# pathkernel ", 0) == 0);
  return nlohmann::json::parse(text.substr(text.find('\n') + 1));
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "pathkernel_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("flag mapping") {
  const char* argv[] = {"pathkernel", "kernel", "--model", "euclidean:1", "--t", "0.0795775", "--x", "0", "--y", "0"};
  const auto cfg = cli::parse_args(10, argv);
  CHECK(cfg.command == "kernel");
  CHECK(cfg.model == "euclidean:1");
  CHECK(cfg.t == 0.0795775);
  CHECK(cfg.x == std::vector<double>{0.0});
  CHECK(cfg.seed == cli::kDefaultSeed);

  const char* fk[] = {"pathkernel", "fk", "expectation", "--model", "circle:6.283185", "--potential", "cos", "--t", "1",
                      "--steps", "64", "--samples", "200000", "--seed", "42"};
  const auto f = cli::parse_args(15, fk);
  CHECK(f.command == "fk");
  CHECK(f.mode == "expectation");
  CHECK(f.potential == "cos");
  CHECK(f.steps == 64);
  CHECK(f.samples == 200000);
  CHECK(f.seed == 42);

  const char* neg[] = {"pathkernel", "kernel", "--x", "-0.5", "--t", "2"};
  CHECK(cli::parse_args(6, neg).x == std::vector<double>{-0.5});
}

TEST_CASE("kernel at t = 1/(4 pi)") {
  const auto r = call({"kernel", "--model", "euclidean:1", "--t", "0.0795775", "--x", "0", "--y", "0"});
  CHECK(r.code == 0);
  CHECK(std::abs(body(r.out)["value"].get<double>() - 1.0) < 1e-6);
}

TEST_CASE("usage errors exit with 2 and name the flag") {
  auto r = call({"kernel", "--t", "-1"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--t") != std::string::npos);
  r = call({"kernel", "--frobnicate", "3"});
  CHECK(r.code == 2);
  r = call({"verify"});
  CHECK(r.code == 2);
  r = call({});
  CHECK(r.code == 2);
  r = call({"kernel", "--model", "sphere:2"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--model") != std::string::npos);
  r = call({"fk", "expectation", "--potential", "wiggly"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--potential") != std::string::npos);
  r = call({"bridge", "--model", "cauchy"});
  CHECK(r.code == 2);
  r = call({"kernel", "--model", "circle:1", "--x", "1.5"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--x") != std::string::npos);
}

TEST_CASE("help and version") {
  auto r = call({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("--model") != std::string::npos);
  r = call({"--version"});
  CHECK(r.code == 0);
  CHECK(r.out == std::string(cli::kVersion) + "\n");
}

TEST_CASE("verify subcommands") {
  auto r = call({"verify", "chapman-kolmogorov", "--model", "euclidean:1"});
  CHECK(r.code == 0);
  CHECK(body(r.out)["residual"].get<double>() < 1e-9);

  r = call({"verify", "moments", "--model", "cauchy", "--a", "4", "--b", "1"});
  CHECK(r.code == 1);
  CHECK(body(r.out)["error"]["kind"] == "divergence");

  r = call({"verify", "moments", "--model", "euclidean:1"});
  CHECK(r.code == 0);
  for (double v : body(r.out)["ratios"]) CHECK(std::abs(v - 12.0) < 1e-6);

  r = call({"verify", "covering", "--model", "circle:1", "--t", "0.05", "--steps", "4", "--samples", "20000"});
  CHECK(r.code == 0);
  CHECK(body(r.out)["pass"] == true);

  r = call({"verify", "delta-family", "--model", "circle:6.283185307179586", "--x", "1"});
  CHECK(r.code == 0);
}

TEST_CASE("mass") {
  const auto r = call({"mass", "--model", "dirichlet:3.141592653589793", "--x", "1.5707963267948966"});
  CHECK(r.code == 0);
  CHECK(body(r.out)["mass"].get<double>() == doctest::Approx(0.468346275450499428).epsilon(1e-9));
  const auto c = call({"mass", "--model", "compactified:dirichlet:3.141592653589793", "--x", "1.5707963267948966"});
  CHECK(body(c.out)["mass"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sample and bridge csv") {
  auto r = call({"sample", "--model", "torus:1,2", "--steps", "4", "--t", "1"});
  CHECK(r.code == 0);
  std::istringstream is(r.out);
  std::string line;
  std::getline(is, line);
  CHECK(line.rfind("# pathkernel 0.1.0 sample ", 0) == 0);
  std::getline(is, line);
  CHECK(line == "t,coord0,coord1,killed");
  std::getline(is, line);
  CHECK(line == "0,0,0,0");
  int rows = 1;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 5);

  r = call({"bridge", "--model", "euclidean:1", "--x", "0", "--y", "1.5", "--steps", "3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\n1,1.5,0\n") != std::string::npos);

  r = call({"sample", "--model", "compactified:dirichlet:1", "--x", "0.5", "--t", "4", "--steps", "4"});
  CHECK(r.code == 0);
  CHECK(r.out.find(",nan,1\n") != std::string::npos);
}

TEST_CASE("fk subcommands") {
  auto r = call({"fk", "expectation", "--model", "circle:6.283185307179586", "--potential", "cos", "--steps", "16",
                 "--samples", "2000", "--seed", "9"});
  CHECK(r.code == 0);
  auto j = body(r.out);
  for (const char* key : {"value", "std_error", "n_samples", "n_steps", "seed", "oracle"}) CHECK(j.contains(key));
  CHECK(j["seed"] == 9);
  CHECK(j["n_steps"] == 16);

  r = call({"fk", "kernel", "--model", "circle:6.283185307179586", "--potential", "const:0.5", "--x", "0", "--y",
            "3.141592653589793", "--samples", "100", "--oracle-m", "256"});
  CHECK(r.code == 0);
  j = body(r.out);
  CHECK(j["value"].get<double>() == doctest::Approx(j["oracle"].get<double>()).epsilon(1e-3));

  r = call({"fk", "monotonicity", "--model", "circle:6.283185307179586", "--potential", "cos", "--samples", "200"});
  CHECK(r.code == 0);
  CHECK(body(r.out)["pathwise"] == true);

  r = call({"fk", "covering-sum", "--model", "circle:6.283185307179586", "--potential", "zero", "--x", "0", "--y", "2",
            "--t", "0.5", "--samples", "10", "--steps", "4"});
  CHECK(r.code == 0);
  CHECK(body(r.out)["residual"].get<double>() < 1e-10);

  r = call({"fk", "expectation", "--model", "euclidean:1", "--potential", "step:0,1,2", "--g", "cos", "--samples",
            "100"});
  CHECK(r.code == 0);
  CHECK_FALSE(body(r.out).contains("oracle"));
}

TEST_CASE("curve and holder") {
  auto r = call({"curve", "--model", "hyperbolic3", "--t-grid", "0.25:1:0.25", "--samples", "500"});
  CHECK(r.code == 0);
  std::istringstream is(r.out);
  std::string line;
  std::getline(is, line);
  std::getline(is, line);
  CHECK(line == "t,analytic,mc,mc_stderr");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 4);

  r = call({"holder", "--paths", "20", "--max-level", "8"});
  CHECK(r.code == 0);
  CHECK(body(r.out)["levels"].size() == 5);
  r = call({"holder", "--min-level", "8", "--max-level", "8"});
  CHECK(r.code == 2);
}

TEST_CASE("config files merge under command-line flags") {
  const auto path = scratch("run.cfg");
  {
    std::ofstream os(path);
    os << "model = circle:1\nt = 0.5\nseed = 17\nsamples = 50\n";
  }
  const auto r = call({"--config", path.string(), "fk", "expectation", "--t", "0.25"});
  CHECK(r.code == 0);
  const auto header = r.out.substr(0, r.out.find('\n'));
  CHECK(header.find("model=circle:1 ") != std::string::npos);
  CHECK(header.find(" t=0.25 ") != std::string::npos);
  CHECK(header.find(" seed=17 ") != std::string::npos);
  CHECK(body(r.out)["n_samples"] == 50);
}

TEST_CASE("outputs are byte-identical across worker counts") {
  const auto a = scratch("w1.json"), b = scratch("w5.json");
  const std::vector<std::string> base{"fk", "expectation", "--model", "circle:6.283185307179586", "--potential", "cos",
                                      "--samples", "3000", "--steps", "16", "--oracle-m", "0"};
  auto args = base;
  args.insert(args.end(), {"--workers", "1", "-o", a.string()});
  CHECK(call(args).code == 0);
  args = base;
  args.insert(args.end(), {"--workers", "5", "-o", b.string()});
  CHECK(call(args).code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).find("workers") == std::string::npos);
}

TEST_CASE("installed tool exit codes") {
  const char* tool = std::getenv("PATHKERNEL_TOOL");
  if (!tool) return;
  const std::string t = tool;
  auto status = [](const std::string& cmd) {
    const int s = std::system((cmd + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(s);
  };
  CHECK(status(t + " verify chapman-kolmogorov --model euclidean:1") == 0);
  CHECK(status(t + " verify moments --model cauchy --a 4 --b 1") == 1);
  CHECK(status(t + " kernel --t -1") == 2);
  const auto a = scratch("env1.csv"), b = scratch("env4.csv");
  CHECK(status(t + " curve --model euclidean:3 --t-grid 0.5,1 --samples 2000 -o " + a.string()) == 0);
  CHECK(status("PATHKERNEL_WORKERS=4 " + t + " curve --model euclidean:3 --t-grid 0.5,1 --samples 2000 -o " +
               b.string()) == 0);
  CHECK(slurp(a) == slurp(b));
}
