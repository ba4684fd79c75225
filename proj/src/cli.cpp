#include "pathkernel/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>

#include "pathkernel/diagnostics.hpp"
#include "pathkernel/errors.hpp"
#include "pathkernel/feynman_kac.hpp"
#include "pathkernel/io.hpp"
#include "pathkernel/parallel.hpp"
#include "pathkernel/quadrature.hpp"
#include "pathkernel/spectral_oracle.hpp"
#include "pathkernel/stats.hpp"

namespace pathkernel::cli {

namespace {

using json = nlohmann::ordered_json;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DomainError(what + ": cannot parse number '" + s + "'");
  }
}

std::vector<double> to_doubles(const std::string& s, const std::string& what) {
  std::vector<double> out;
  for (const auto& part : split(s, ',')) out.push_back(to_double(part, what));
  return out;
}

TransitionKernel parse_model(const std::string& spec, const TruncationPolicy& policy) {
  const auto parts = split(spec, ':');
  const std::string& kind = parts.at(0);
  auto arg = [&](std::size_t i) -> const std::string& {
    if (parts.size() <= i) throw DomainError("--model " + spec + ": missing parameter");
    return parts[i];
  };
  if (kind == "cauchy" && parts.size() == 1) return TransitionKernel::cauchy(policy);
  if (kind == "hyperbolic3" && parts.size() == 1) {
    return TransitionKernel(ManifoldModel::hyperbolic3(), KernelKind::Heat, policy);
  }
  if (kind == "euclidean" && parts.size() <= 2) {
    const double n = parts.size() == 1 ? 1.0 : to_double(arg(1), "--model");
    if (n != std::floor(n) || n < 1) throw DomainError("--model " + spec + ": dimension must be a positive integer");
    return TransitionKernel(ManifoldModel::euclidean(static_cast<int>(n)), KernelKind::Heat, policy);
  }
  if (kind == "circle" && parts.size() == 2) {
    return TransitionKernel(ManifoldModel::circle(to_double(arg(1), "--model")), KernelKind::Heat, policy);
  }
  if (kind == "torus" && parts.size() == 2) {
    return TransitionKernel(ManifoldModel::flat_torus(to_doubles(arg(1), "--model")), KernelKind::Heat, policy);
  }
  if (kind == "dirichlet" && parts.size() == 2) {
    return TransitionKernel(ManifoldModel::dirichlet_interval(to_double(arg(1), "--model")), KernelKind::Heat,
                            policy);
  }
  if (kind == "compactified" && parts.size() == 3 && parts[1] == "dirichlet") {
    return TransitionKernel(
        ManifoldModel::compactified(ManifoldModel::dirichlet_interval(to_double(arg(2), "--model"))),
        KernelKind::Heat, policy);
  }
  throw DomainError("--model " + spec +
                    ": expected euclidean:n, hyperbolic3, torus:L1,L2, circle:L, dirichlet:L, "
                    "compactified:dirichlet:L or cauchy");
}

Potential parse_potential(const std::string& spec, const std::string& flag) {
  if (spec == "zero") return Potential::zero();
  if (spec == "cos") return Potential::cosine();
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (head == "const" && !rest.empty()) return Potential::constant(to_double(rest, flag));
  if (head == "step") {
    const auto v = to_doubles(rest, flag);
    if (v.size() == 3 && v[0] < v[1]) return Potential::step(v[0], v[1], v[2]);
  }
  throw DomainError(flag + " " + spec + ": expected zero, const:c, cos or step:a,b,v");
}

TerminalFunction parse_terminal(const std::string& spec) {
  if (spec == "one") return [](const Point&) { return 1.0; };
  if (spec == "cos") return [](const Point& x) { return std::cos(x.coords[0]); };
  throw DomainError("--g " + spec + ": expected one or cos");
}

Point parse_point(const ManifoldModel& m, const std::vector<double>& v, const std::string& flag) {
  if (v.empty()) return origin(m);
  Point p(v);
  if (m.interior().is<model::Hyperbolic3>() && v.size() == 3) p = hyperboloid_point(v[0], v[1], v[2]);
  try {
    validate_point(m, p);
  } catch (const DomainError& e) {
    throw DomainError(flag + ": " + e.what());
  }
  return p;
}

std::vector<double> parse_range(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() == 3) {
    const double lo = to_double(parts[0], "--t-grid"), hi = to_double(parts[1], "--t-grid"),
                 step = to_double(parts[2], "--t-grid");
    if (!(lo > 0 && hi >= lo && step > 0)) throw DomainError("--t-grid " + spec + ": need 0 < lo <= hi, step > 0");
    std::vector<double> out;
    const auto n = static_cast<long long>(std::floor((hi - lo) / step + 1e-9));
    for (long long i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
    return out;
  }
  const auto out = to_doubles(spec, "--t-grid");
  for (double t : out) {
    if (!(t > 0)) throw DomainError("--t-grid " + spec + ": times must be positive");
  }
  return out;
}

json point_json(const Point& p) {
  if (p.cemetery) return "cemetery";
  return json(p.coords);
}

// Output sink with the mandatory leading comment line.
class Sink {
 public:
  Sink(const RunConfig& cfg, std::ostream& fallback) {
    if (!cfg.output.empty()) {
      file_ = std::make_unique<std::ofstream>(cfg.output, std::ios::binary | std::ios::trunc);
      if (!*file_) throw DomainError("--output " + cfg.output + ": cannot open for writing");
      os_ = file_.get();
    } else {
      os_ = &fallback;
    }
    *os_ << "# pathkernel " << kVersion << ' ' << cfg.command << (cfg.mode.empty() ? "" : " " + cfg.mode) << ' '
         << describe(cfg) << '\n';
  }
  std::ostream& os() { return *os_; }
  void json_out(const json& j) { *os_ << io::dump_json(j) << '\n'; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

struct Context {
  const RunConfig& cfg;
  TransitionKernel kernel;
  Sink& sink;
};

int run_kernel(Context& c) {
  const auto& m = c.kernel.model();
  const Point x = parse_point(m, c.cfg.x, "--x");
  const Point y = parse_point(m, c.cfg.y, "--y");
  json j;
  j["model"] = c.kernel.name();
  j["t"] = c.cfg.t;
  j["x"] = point_json(x);
  j["y"] = point_json(y);
  j["value"] = eval(c.kernel, c.cfg.t, x, y);
  c.sink.json_out(j);
  return 0;
}

int run_mass(Context& c) {
  const Point x = parse_point(c.kernel.model(), c.cfg.x, "--x");
  json j;
  j["model"] = c.kernel.name();
  j["t"] = c.cfg.t;
  j["x"] = point_json(x);
  j["mass"] = total_mass(c.kernel, c.cfg.t, x, c.cfg.quad_tol);
  j["quadrature_mass"] = mass_by_quadrature(c.kernel, c.cfg.t, x, c.cfg.quad_tol);
  c.sink.json_out(j);
  return 0;
}

int run_verify(Context& c) {
  const auto& cfg = c.cfg;
  const auto& m = c.kernel.model();
  json j;
  j["model"] = c.kernel.name();
  bool pass = true;
  if (cfg.mode == "chapman-kolmogorov") {
    const Point x = parse_point(m, cfg.x, "--x");
    const Point z = parse_point(m, cfg.y, "--y");
    const double r = chapman_kolmogorov_residual(c.kernel, cfg.s, cfg.t, x, z, cfg.quad_tol);
    pass = r < 1e-9;
    j["s"] = cfg.s;
    j["t"] = cfg.t;
    j["x"] = point_json(x);
    j["z"] = point_json(z);
    j["residual"] = r;
    j["tolerance"] = 1e-9;
  } else if (cfg.mode == "moments") {
    MomentCheckConfig mc;
    mc.a = cfg.a;
    mc.b = cfg.b;
    mc.tau_grid = to_doubles(cfg.tau_grid, "--tau-grid");
    mc.quad_tol = cfg.quad_tol;
    if (cfg.moment_mode == "integrated") {
      mc.mode = MomentMode::Integrated;
    } else if (cfg.moment_mode == "pointwise") {
      mc.mode = MomentMode::Pointwise;
    } else {
      throw DomainError("--moment-mode " + cfg.moment_mode + ": expected integrated or pointwise");
    }
    const auto r = moment_check(c.kernel, mc);
    j["a"] = cfg.a;
    j["b"] = cfg.b;
    j["mode"] = cfg.moment_mode;
    j["tau"] = mc.tau_grid;
    j["ratios"] = r.ratios;
    j["worst_constant"] = r.worst_constant;
  } else if (cfg.mode == "covering") {
    if (!m.is<model::Circle>() || c.kernel.kind() != KernelKind::Heat) {
      throw DomainError("--model: verify covering needs circle:L");
    }
    const double L = m.periods()[0];
    const auto cov = CoveringDescriptor::of(m);
    const TransitionKernel line(cov.total);
    const Point x0 = parse_point(m, cfg.x, "--x");
    const TimeGrid grid = TimeGrid::uniform(cfg.t, cfg.steps);
    constexpr int bins = 64;
    std::vector<int> bin_of(cfg.samples);
    parallel_for(cfg.samples, resolve_workers(cfg.workers), [&](std::size_t i) {
      const Path p = sample_path(line, x0, grid, RngContract{cfg.seed, i});
      const double u = project_point(cov, p.end()).coords[0];
      bin_of[i] = std::min(bins - 1, static_cast<int>(u / L * bins));
    });
    std::vector<long long> counts(bins, 0);
    for (int b : bin_of) counts[b]++;
    std::vector<double> probs(bins);
    for (int b = 0; b < bins; ++b) {
      probs[b] = quad::simpson_or_throw([&](double u) { return theta_kernel_1d(cfg.t, u - x0.coords[0], L, c.kernel.policy()); },
                                        L * b / bins, L * (b + 1) / bins, 1e-13, 4);
    }
    const auto chi = stats::chi_square(counts, probs, 0.01);
    pass = chi.pass;
    j["t"] = cfg.t;
    j["n_samples"] = cfg.samples;
    j["n_steps"] = cfg.steps;
    j["seed"] = cfg.seed;
    j["bins"] = bins;
    j["statistic"] = chi.statistic;
    j["dof"] = chi.dof;
    j["critical"] = chi.critical;
  } else if (cfg.mode == "delta-family") {
    const Point x = parse_point(m, cfg.x, "--x");
    const double x0 = x.coords[0];
    auto u = [x0](const Point& z) { return 1.0 / (1.0 + (z.coords[0] - x0 - 0.2) * (z.coords[0] - x0 - 0.2)); };
    const double target = u(x);
    std::vector<double> times{1e-1, 1e-2, 1e-3, 1e-4}, errs;
    for (double t : times) errs.push_back(std::abs(smooth_against_kernel(c.kernel, t, x, u, cfg.quad_tol) - target));
    for (std::size_t i = 1; i < errs.size(); ++i) pass = pass && errs[i] < errs[i - 1];
    pass = pass && errs.back() < 1e-3;
    j["x"] = point_json(x);
    j["t"] = times;
    j["errors"] = errs;
  } else {
    throw DomainError("verify: unknown check " + cfg.mode);
  }
  j["pass"] = pass;
  c.sink.json_out(j);
  return pass ? 0 : 1;
}

int run_sample(Context& c, bool bridge) {
  const auto& m = c.kernel.model();
  const Point x = parse_point(m, c.cfg.x, "--x");
  const TimeGrid grid = TimeGrid::uniform(c.cfg.t, c.cfg.steps);
  const RngContract rng{c.cfg.seed, c.cfg.index};
  const Path p = bridge ? sample_bridge(c.kernel, x, parse_point(m, c.cfg.y, "--y"), grid, rng)
                        : sample_path(c.kernel, x, grid, rng);
  io::write_path_csv(c.sink.os(), m, p);
  return 0;
}

std::optional<SpectralOracle> maybe_oracle(const Context& c, const Potential& V) {
  const auto& in = c.kernel.model().interior();
  if (c.cfg.oracle_m == 0 || c.kernel.kind() != KernelKind::Heat) return std::nullopt;
  if (!in.is<model::Circle>() && !in.is<model::DirichletInterval>()) return std::nullopt;
  return spectral_oracle(in, c.cfg.oracle_m, V, c.cfg.t);
}

std::optional<std::size_t> node_of(const SpectralOracle& o, const Point& p) {
  try {
    return o.node_index(p.coords[0]);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

RiemannRule parse_rule(const std::string& r) {
  if (r == "right") return RiemannRule::RightEndpoint;
  if (r == "trapezoid") return RiemannRule::Trapezoid;
  throw DomainError("--rule " + r + ": expected right or trapezoid");
}

int run_fk(Context& c) {
  const auto& cfg = c.cfg;
  const auto& m = c.kernel.model();
  const Potential V = parse_potential(cfg.potential, "--potential");
  const RiemannRule rule = parse_rule(cfg.rule);
  const Point x = parse_point(m, cfg.x, "--x");
  if (cfg.mode == "expectation") {
    const TerminalFunction g = parse_terminal(cfg.terminal);
    const auto e = fk_expectation(
        FKProblem{c.kernel, V, g, x, cfg.t, cfg.steps, cfg.samples, cfg.seed, cfg.workers, rule});
    std::optional<double> ref;
    if (auto o = maybe_oracle(c, V)) {
      if (auto i = node_of(*o, x)) {
        ref = o->semigroup_at(*i, [&](double u) { return g(Point{u}); });
      }
    }
    c.sink.json_out(io::estimate_json(e, cfg.steps, ref));
    return 0;
  }
  if (cfg.mode == "kernel") {
    const Point y = parse_point(m, cfg.y, "--y");
    const auto e = fk_kernel(FKKernelProblem{c.kernel, V, x, y, cfg.t, cfg.steps, cfg.samples, cfg.seed,
                                             cfg.workers, rule});
    std::optional<double> ref;
    if (auto o = maybe_oracle(c, V)) {
      auto i = node_of(*o, x), k = node_of(*o, y);
      if (i && k) ref = o->kernel(*i, *k);
    }
    c.sink.json_out(io::estimate_json(e, cfg.steps, ref));
    return 0;
  }
  if (cfg.mode == "monotonicity") {
    const Potential V2 = cfg.potential2.empty() ? V.shifted(0.5) : parse_potential(cfg.potential2, "--potential2");
    std::variant<Point, TerminalFunction> target = parse_terminal(cfg.terminal);
    if (!cfg.y.empty()) target = parse_point(m, cfg.y, "--y");
    const auto rep = fk_monotonicity_check(c.kernel, V, V2, x, target, cfg.t, cfg.steps, cfg.samples, cfg.seed,
                                           cfg.workers);
    json j;
    j["pathwise"] = rep.pathwise;
    j["violations"] = rep.violations;
    j["first"] = io::estimate_json(rep.first, cfg.steps);
    j["second"] = io::estimate_json(rep.second, cfg.steps);
    c.sink.json_out(j);
    return rep.pathwise ? 0 : 1;
  }
  if (cfg.mode == "covering-sum") {
    if (!m.is_periodic()) throw DomainError("--model: fk covering-sum needs circle:L or torus:L1,...");
    const Point y = parse_point(m, cfg.y, "--y");
    const auto rep = fk_covering_sum_check(CoveringDescriptor::of(m), V, x, y, cfg.t, cfg.windings, cfg.steps,
                                           cfg.samples, cfg.seed, cfg.workers);
    json j;
    j["base"] = io::estimate_json(rep.base, cfg.steps);
    json lifted = json::array();
    for (std::size_t i = 0; i < rep.lifted.size(); ++i) {
      json row = io::estimate_json(rep.lifted[i], cfg.steps);
      row["deck"] = rep.deck[i];
      lifted.push_back(row);
    }
    j["lifted"] = lifted;
    j["lifted_sum"] = rep.lifted_sum;
    j["residual"] = rep.residual;
    j["sigma"] = rep.sigma;
    j["tail_bound"] = rep.tail_bound;
    j["pass"] = rep.pass;
    c.sink.json_out(j);
    return rep.pass ? 0 : 1;
  }
  throw DomainError("fk: unknown mode " + cfg.mode);
}

int run_curve(Context& c) {
  const auto rows = expected_distance_curve(c.kernel.model(), parse_range(c.cfg.t_grid), c.cfg.samples, c.cfg.seed,
                                            c.cfg.workers);
  io::write_curve_csv(c.sink.os(), rows);
  return 0;
}

int run_holder(Context& c) {
  const Point x = parse_point(c.kernel.model(), c.cfg.x, "--x");
  const auto paths =
      sample_dyadic_ensemble(c.kernel, x, c.cfg.t, c.cfg.max_level, c.cfg.paths, c.cfg.seed, c.cfg.workers);
  const auto rep = holder_exponent(c.kernel.model(), paths, c.cfg.min_level, c.cfg.max_level);
  json j;
  j["model"] = c.kernel.name();
  j["seed"] = c.cfg.seed;
  j["n_paths"] = c.cfg.paths;
  j["levels"] = rep.levels;
  j["scales"] = rep.scales;
  j["max_increments"] = rep.max_increments;
  j["fitted_exponent"] = rep.fitted_exponent;
  j["r_squared"] = rep.r_squared;
  c.sink.json_out(j);
  return 0;
}

std::string join_doubles(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + io::format_number(v[i]);
  return s;
}

}  // namespace

std::string describe(const RunConfig& c) {
  std::ostringstream os;
  os << "model=" << c.model << " potential=" << c.potential << " potential2=" << c.potential2
     << " g=" << c.terminal << " rule=" << c.rule << " moment-mode=" << c.moment_mode
     << " tau-grid=" << c.tau_grid << " t-grid=" << c.t_grid << " x=" << join_doubles(c.x)
     << " y=" << join_doubles(c.y) << " t=" << io::format_number(c.t) << " s=" << io::format_number(c.s)
     << " a=" << io::format_number(c.a) << " b=" << io::format_number(c.b) << " steps=" << c.steps
     << " samples=" << c.samples << " index=" << c.index << " paths=" << c.paths << " windings=" << c.windings
     << " min-level=" << c.min_level << " max-level=" << c.max_level << " oracle-m=" << c.oracle_m
     << " seed=" << c.seed << " tail-tolerance=" << io::format_number(c.tail_tolerance)
     << " max-terms=" << c.max_terms << " quad-tol=" << io::format_number(c.quad_tol);
  return os.str();
}

RunConfig parse_args(int argc, const char* const* argv) {
  RunConfig cfg;
  CLI::App app{"Monte Carlo path integrals on model manifolds", "pathkernel"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "read key = value defaults from FILE");
  app.fallthrough();
  app.require_subcommand(1);

  app.add_option("--model", cfg.model, "euclidean:n | hyperbolic3 | torus:L1,L2 | circle:L | dirichlet:L | "
                                        "compactified:dirichlet:L | cauchy")
      ->capture_default_str();
  app.add_option("--potential", cfg.potential, "zero | const:c | cos | step:a,b,v")->capture_default_str();
  app.add_option("--potential2", cfg.potential2, "second potential for fk monotonicity (default: potential+0.5)");
  app.add_option("--g", cfg.terminal, "terminal data: one | cos")->capture_default_str();
  app.add_option("--rule", cfg.rule, "Riemann rule: right | trapezoid")->capture_default_str();
  app.add_option("--moment-mode", cfg.moment_mode, "integrated | pointwise")->capture_default_str();
  app.add_option("--tau-grid", cfg.tau_grid, "comma-separated tau values")->capture_default_str();
  app.add_option("--t-grid", cfg.t_grid, "lo:hi:step or comma list")->capture_default_str();
  app.add_option("--x", cfg.x, "start point, comma-separated coordinates")->delimiter(',');
  app.add_option("--y", cfg.y, "end point, comma-separated coordinates")->delimiter(',');
  app.add_option("--t", cfg.t, "time or horizon")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--s", cfg.s, "first time for chapman-kolmogorov")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--a", cfg.a, "moment exponent a")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--b", cfg.b, "moment exponent b")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--steps", cfg.steps, "time steps")->check(CLI::Range(std::size_t{1}, std::size_t{1} << 30))
      ->capture_default_str();
  app.add_option("--samples", cfg.samples, "Monte Carlo samples")->check(CLI::Range(std::size_t{1}, std::size_t{1} << 40))
      ->capture_default_str();
  app.add_option("--index", cfg.index, "sample index for sample/bridge")->capture_default_str();
  app.add_option("--paths", cfg.paths, "paths in the Hoelder ensemble")->check(CLI::Range(std::size_t{1}, std::size_t{1} << 30))
      ->capture_default_str();
  app.add_option("--windings", cfg.windings, "winding truncation W")->check(CLI::Range(0, 1000))->capture_default_str();
  app.add_option("--min-level", cfg.min_level, "coarsest dyadic level")->check(CLI::Range(0, 24))->capture_default_str();
  app.add_option("--max-level", cfg.max_level, "finest dyadic level")->check(CLI::Range(1, 24))->capture_default_str();
  app.add_option("--oracle-m", cfg.oracle_m, "spectral oracle grid size, 0 disables")->capture_default_str();
  app.add_option("--seed", cfg.seed, "master seed")->capture_default_str();
  app.add_option("--output,-o", cfg.output, "output file (default stdout)");
  app.add_option("--workers", cfg.workers, "worker threads (PATHKERNEL_WORKERS overrides)")
      ->check(CLI::Range(1u, 4096u))->capture_default_str();
  app.add_option("--tail-tolerance", cfg.tail_tolerance, "series truncation tolerance")
      ->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--max-terms", cfg.max_terms, "series term budget")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--quad-tol", cfg.quad_tol, "quadrature tolerance")->check(CLI::PositiveNumber)->capture_default_str();

  app.add_subcommand("kernel", "evaluate p_t(x, y)");
  app.add_subcommand("mass", "total mass of p_t(x, .)");
  auto* verify = app.add_subcommand("verify", "kernel checks");
  verify->require_subcommand(1);
  for (const char* m : {"chapman-kolmogorov", "moments", "covering", "delta-family"}) verify->add_subcommand(m);
  app.add_subcommand("sample", "dump one sampled path as CSV");
  app.add_subcommand("bridge", "dump one bridge path as CSV");
  auto* fk = app.add_subcommand("fk", "Feynman-Kac estimates");
  fk->require_subcommand(1);
  for (const char* m : {"expectation", "kernel", "monotonicity", "covering-sum"}) fk->add_subcommand(m);
  app.add_subcommand("curve", "expected distance curve as CSV");
  app.add_subcommand("holder", "Hoelder exponent of a dyadic ensemble");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested{app.help("", CLI::AppFormatMode::All)};
  } catch (const CLI::CallForVersion&) {
    throw HelpRequested{std::string(kVersion) + "\n"};
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  for (auto* sub : app.get_subcommands()) {
    cfg.command = sub->get_name();
    for (auto* inner : sub->get_subcommands()) cfg.mode = inner->get_name();
  }
  if (cfg.min_level >= cfg.max_level) throw UsageError("--min-level must be below --max-level");
  return cfg;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::unique_ptr<Sink> sink;
  try {
    const TruncationPolicy policy{cfg.tail_tolerance, cfg.max_terms};
    Context c{cfg, parse_model(cfg.model, policy), *(sink = std::make_unique<Sink>(cfg, out))};
    if (cfg.command == "kernel") return run_kernel(c);
    if (cfg.command == "mass") return run_mass(c);
    if (cfg.command == "verify") return run_verify(c);
    if (cfg.command == "sample") return run_sample(c, false);
    if (cfg.command == "bridge") return run_sample(c, true);
    if (cfg.command == "fk") return run_fk(c);
    if (cfg.command == "curve") return run_curve(c);
    if (cfg.command == "holder") return run_holder(c);
    throw DomainError("unknown subcommand " + cfg.command);
  } catch (const DomainError& e) {
    err << "pathkernel: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    err << "pathkernel: " << e.what() << '\n';
    json j;
    json rec;
    rec["kind"] = dynamic_cast<const DivergenceError*>(&e) ? "divergence" : "numeric";
    rec["message"] = e.what();
    j["error"] = rec;
    j["seed"] = cfg.seed;
    if (sink) {
      sink->json_out(j);
    } else {
      out << io::dump_json(j) << '\n';
    }
    return 1;
  }
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = parse_args(argc, argv);
  } catch (const HelpRequested& h) {
    out << h.text;
    return 0;
  } catch (const UsageError& e) {
    err << "pathkernel: " << e.what() << '\n';
    return 2;
  }
  return run(cfg, out, err);
}

}  // namespace pathkernel::cli
