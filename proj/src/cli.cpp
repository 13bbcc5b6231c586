#include "chemowave/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "chemowave/convolve.hpp"
#include "chemowave/diagnostics.hpp"
#include "chemowave/evolver.hpp"
#include "chemowave/io.hpp"
#include "chemowave/scan.hpp"
#include "chemowave/slab.hpp"
#include "chemowave/spectral.hpp"

namespace chemowave {

namespace {

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();
using nlohmann::json;

struct Options {
  std::string command;
  double chi = 0.0;
  double sigma = 1.0;
  std::string kernel = "exp";
  double a = kUnset;
  double theta = 0.005;
  double dx = kUnset;
  double dt = kUnset;
  double tmax = kUnset;
  std::string out;
  std::string config;
  unsigned workers = 1;

  double xmin = -50.0, xmax = 350.0;
  double snapshot_every = 1.0, level = 0.5, window = 0.4;
  std::string scheme = "flux-limited";
  std::string initial = "smooth";

  double tau = 1.0, tol = 1e-9, damping = 1.0;
  int max_iter = 100;

  std::string input;
  double c = kUnset;
  double c_test = 2.0;
  double eps = 0.25;
  double R = kUnset;

  std::string chi_list, sigma_list, mode = "slab";
};

void add_common(CLI::App* app, Options& o) {
  app->add_option("--chi", o.chi, "chemotactic strength chi (signed)");
  app->add_option("--sigma", o.sigma, "kernel length scale sigma > 0");
  app->add_option("--kernel", o.kernel, "exp | tophat | powerlaw:<k> | stretched:<alpha>");
  app->add_option("--a", o.a, "slab half-length");
  app->add_option("--theta", o.theta, "normalisation level theta");
  app->add_option("--dx", o.dx, "grid spacing");
  app->add_option("--dt", o.dt, "time step");
  app->add_option("--tmax", o.tmax, "final time");
  app->add_option("--out", o.out, "output file (relative paths resolve under $FKPP_OUT_DIR)");
  app->add_option("--config", o.config, "JSON file of option values; flags override it");
  app->add_option("--workers", o.workers, "worker threads for scan");
}

void add_evolve_opts(CLI::App* app, Options& o) {
  app->add_option("--xmin", o.xmin, "left end of the domain");
  app->add_option("--xmax", o.xmax, "right end of the domain");
  app->add_option("--snapshot-every", o.snapshot_every, "snapshot period");
  app->add_option("--level", o.level, "tracked front level");
  app->add_option("--window", o.window, "fraction of the run used for the speed fit");
  app->add_option("--scheme", o.scheme, "flux-limited | upwind");
  app->add_option("--initial", o.initial, "smooth | step");
}

void add_slab_opts(CLI::App* app, Options& o) {
  app->add_option("--tau", o.tau, "homotopy parameter in [0, 1]");
  app->add_option("--tol", o.tol, "convergence tolerance");
  app->add_option("--max-iter", o.max_iter, "Newton iterations per tau step");
  app->add_option("--damping", o.damping, "initial Newton step length in (0, 1]");
}

std::string resolve_out(const std::string& given, const std::string& fallback) {
  std::filesystem::path p = given.empty() ? fallback : given;
  if (p.is_relative()) {
    if (const char* root = std::getenv("FKPP_OUT_DIR"); root && *root) p = std::filesystem::path(root) / p;
  }
  return p.string();
}

std::string json_scalar(const json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format_double(v.get<double>());
  throw ValidationError("config key '" + key + "' has an unsupported value type");
}

// Turns {"chi": -0.05, "chi-list": [..]} into ["--chi", "-0.05", ...].
std::vector<std::string> config_args(const std::string& path) {
  json j;
  try {
    j = read_json(path);
  } catch (const std::exception& e) {
    throw ValidationError(std::string("cannot load config: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("config file must hold a JSON object");
  std::vector<std::string> out;
  for (const auto& [key, value] : j.items()) {
    if (key == "config") continue;
    std::string text;
    if (value.is_array()) {
      for (std::size_t i = 0; i < value.size(); ++i) text += (i ? "," : "") + json_scalar(value[i], key);
    } else {
      text = json_scalar(value, key);
    }
    out.push_back("--" + key);
    out.push_back(text);
  }
  return out;
}

std::vector<double> parse_list(const std::string& s, const char* what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || *end != '\0') throw ValidationError(std::string("bad number in ") + what + ": '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ValidationError(std::string(what) + " is empty");
  return out;
}

KernelSpec kernel_of(const Options& o) {
  try {
    return KernelSpec::parse(o.kernel);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
}

double or_default(double v, double d) { return std::isnan(v) ? d : v; }

SlabConfig slab_config(const Options& o) {
  SlabConfig cfg;
  cfg.params = {o.chi, o.sigma};
  cfg.spec = kernel_of(o);
  cfg.a = or_default(o.a, 60.0);
  cfg.theta = o.theta;
  cfg.dx = or_default(o.dx, 0.05);
  cfg.tau = o.tau;
  cfg.tol = o.tol;
  cfg.max_iter = o.max_iter;
  cfg.damping = o.damping;
  cfg.validate();
  return cfg;
}

json slab_config_json(const SlabConfig& cfg) {
  return {{"chi", cfg.params.chi},   {"sigma", cfg.params.sigma}, {"kernel", cfg.spec.name()},
          {"a", cfg.a},              {"theta", cfg.theta},        {"dx", cfg.dx},
          {"tau", cfg.tau},          {"tol", cfg.tol},            {"max_iter", cfg.max_iter},
          {"damping", cfg.damping},  {"tau_step", cfg.tau_step}};
}

EvolveConfig evolve_config(const Options& o) {
  EvolveConfig cfg;
  cfg.params = {o.chi, o.sigma};
  cfg.params.validate();
  cfg.spec = kernel_of(o);
  cfg.grid = Grid1D::with_spacing(o.xmin, o.xmax, or_default(o.dx, 0.1));
  cfg.dt = or_default(o.dt, 0.002);
  cfg.t_max = or_default(o.tmax, 50.0);
  cfg.snapshot_every = o.snapshot_every;
  cfg.level = o.level;
  if (o.scheme == "upwind") cfg.scheme = AdvectionScheme::Upwind;
  else if (o.scheme == "flux-limited") cfg.scheme = AdvectionScheme::FluxLimited;
  else throw ValidationError("--scheme must be flux-limited or upwind");
  if (o.initial == "step") cfg.initial = InitialCondition::step();
  else if (o.initial == "smooth") cfg.initial = InitialCondition::smoothed();
  else throw ValidationError("--initial must be smooth or step");
  cfg.validate();
  return cfg;
}

json evolve_config_json(const EvolveConfig& cfg, const Options& o) {
  return {{"chi", cfg.params.chi}, {"sigma", cfg.params.sigma}, {"kernel", cfg.spec.name()},
          {"xmin", cfg.grid.x_min}, {"xmax", cfg.grid.x_max},   {"n", cfg.grid.n},
          {"dx", cfg.grid.dx()},    {"dt", cfg.dt},             {"tmax", cfg.t_max},
          {"snapshot_every", cfg.snapshot_every}, {"level", cfg.level}, {"window", o.window},
          {"scheme", o.scheme},     {"initial", o.initial}};
}

std::pair<Field, Field> drift(const Field& u, const KernelSpec& spec, const ChemoParams& p) {
  if (p.chi == 0.0) return {Field(u.grid, 0.0), Field(u.grid, 0.0)};
  AdvectionOperator op(u.grid, spec, p);
  return {op.advection(u), op.gradient(u)};
}

int run_evolve(const Options& o, std::ostream& out) {
  const EvolveConfig cfg = evolve_config(o);
  const Trajectory traj = evolve(cfg);
  const Field& u = traj.snapshots.back().u;
  const auto [v, vx] = drift(u, cfg.spec, cfg.params);
  json meta = {{"command", "evolve"}, {"config", evolve_config_json(cfg, o)}};
  meta["t_end"] = traj.t_end;
  meta["clipped_mass"] = traj.clipped_mass;
  meta["max_u"] = traj.max_u;
  meta["aborted"] = traj.aborted;
  meta["abort_reason"] = traj.abort_reason;
  std::vector<double> ts, xs;
  for (const auto& [t, x] : traj.front_positions) {
    ts.push_back(t);
    xs.push_back(x);
  }
  meta["front_t"] = ts;
  meta["front_x"] = xs;
  std::optional<SpeedEstimate> est;
  try {
    est = measure_speed(traj, o.level, o.window);
    meta["c"] = est->c;
    meta["speed"] = {{"c", est->c}, {"stderr", est->stderr_c}, {"t_start", est->t_start},
                     {"t_end", est->t_end}, {"samples", est->samples}, {"method", "level-set fit"}};
  } catch (const ValidationError& e) {
    meta["speed_error"] = e.what();
  }
  const std::string path = resolve_out(o.out, "evolve.csv");
  write_profile(path, u, v, vx, meta);
  out << "evolve: t=" << traj.t_end;
  if (est) out << " c=" << format_double(est->c) << " +- " << format_double(est->stderr_c);
  out << " -> " << path << "\n";
  if (traj.aborted) {
    out << "aborted: " << traj.abort_reason << "\n";
    return kExitNoConvergence;
  }
  return kExitOk;
}

int run_slab(const Options& o, std::ostream& out) {
  const SlabConfig cfg = slab_config(o);
  const SlabSolution sol = fixed_point(cfg);
  json meta = {{"command", "slab"}, {"config", slab_config_json(cfg)}};
  meta["c"] = sol.c;
  meta["residual"] = sol.residual;
  meta["iterations"] = sol.iterations;
  meta["converged"] = sol.converged;
  meta["tau"] = sol.tau;
  meta["tau_path"] = sol.tau_path;
  meta["c_path"] = sol.c_path;
  meta["integral_speed"] = speed_from_integral(sol.u);
  if (sol.converged) meta["checks"] = slab_bounds_check(sol).to_json();
  const std::string path = resolve_out(o.out, "slab.csv");
  write_profile(path, sol.u, sol.v, sol.vx, meta);
  out << "slab: c=" << format_double(sol.c) << " residual=" << sol.residual << " iterations=" << sol.iterations
      << (sol.converged ? "" : " (NOT CONVERGED)") << " -> " << path << "\n";
  return sol.converged ? kExitOk : kExitNoConvergence;
}

struct LoadedProfile {
  Field u, v, vx;
  json meta;
};

LoadedProfile load_profile(const Options& o) {
  if (o.input.empty()) throw ValidationError("--input is required");
  const Profile p = read_csv(o.input);
  LoadedProfile lp;
  lp.u = p.field("u", 1.0, 0.0);
  const ChemoParams params{o.chi, o.sigma};
  params.validate();
  bool has_v = false;
  for (const auto& name : p.columns) has_v = has_v || name == "v";
  if (has_v) {
    lp.v = p.field("v", 0.0, 0.0);
    lp.vx = p.field("v_x", 0.0, 0.0);
  } else {
    std::tie(lp.v, lp.vx) = drift(lp.u, kernel_of(o), params);
  }
  const std::string side = o.input + ".meta.json";
  if (std::filesystem::exists(side)) lp.meta = read_json(side);
  return lp;
}

int run_eigen(const Options& o, std::ostream& out) {
  Field u, v, vx;
  json meta = {{"command", "eigen"}};
  if (!o.input.empty()) {
    auto lp = load_profile(o);
    u = std::move(lp.u);
    v = std::move(lp.v);
    vx = std::move(lp.vx);
    meta["config"] = {{"input", o.input}, {"chi", o.chi}, {"sigma", o.sigma}, {"c_test", o.c_test}};
  } else {
    const SlabConfig cfg = slab_config(o);
    const SlabSolution sol = fixed_point(cfg);
    if (!sol.converged) {
      out << "eigen: slab solve did not converge\n";
      return kExitNoConvergence;
    }
    u = sol.u;
    v = sol.v;
    vx = sol.vx;
    meta["config"] = slab_config_json(cfg);
    meta["config"]["c_test"] = o.c_test;
    meta["c_slab"] = sol.c;
  }
  const Potential V = assemble_potential(u, o.c_test, v, vx);
  const EigenPair ep = principal_eigenpair(V);
  meta["lambda"] = ep.lambda;
  meta["rayleigh_residual"] = ep.rayleigh_residual;
  meta["c_test"] = o.c_test;
  meta["iterations"] = ep.iterations;
  if (!std::isnan(ep.dense_lambda)) meta["dense_lambda"] = ep.dense_lambda;
  const std::string path = resolve_out(o.out, "eigen.csv");
  const auto xs = V.grid.nodes();
  write_columns(path, {"x", "V", "phi"}, {&xs, &V.values, &ep.phi.values});
  meta["version"] = version();
  write_json(path + ".meta.json", meta);
  out << "eigen: lambda=" << format_double(ep.lambda) << " at c=" << o.c_test << " -> " << path << "\n";
  return kExitOk;
}

int run_scan_cmd(const Options& o, std::ostream& out) {
  ScanConfig sc;
  sc.chi_values = parse_list(o.chi_list.empty() ? format_double(o.chi) : o.chi_list, "--chi-list");
  sc.sigma_values = parse_list(o.sigma_list.empty() ? format_double(o.sigma) : o.sigma_list, "--sigma-list");
  sc.spec = kernel_of(o);
  sc.mode = parse_scan_mode(o.mode);
  sc.workers = o.workers;
  sc.level = o.level;
  sc.window_fraction = o.window;
  sc.slab.a = or_default(o.a, 60.0);
  sc.slab.theta = o.theta;
  sc.slab.dx = or_default(o.dx, 0.05);
  sc.slab.tau = o.tau;
  sc.slab.tol = o.tol;
  sc.slab.max_iter = o.max_iter;
  sc.evolve.grid = Grid1D::with_spacing(o.xmin, o.xmax, or_default(o.dx, 0.1));
  sc.evolve.dt = or_default(o.dt, 0.002);
  sc.evolve.t_max = or_default(o.tmax, 50.0);
  sc.evolve.snapshot_every = o.snapshot_every;
  sc.evolve.level = o.level;
  const auto records = run_scan(sc);
  const std::string path = resolve_out(o.out, "scan.csv");
  write_text(path, scan_csv(records));
  write_text(path + ".sandwich.csv", sandwich_csv(sandwich_table(records)));
  for (const auto& r : records)
    out << "chi=" << r.chi << " sigma=" << r.sigma << " c=" << format_double(r.c_measured()) << " "
        << to_string(r.classification) << "\n";
  out << "scan: " << records.size() << " cells -> " << path << "\n";
  return kExitOk;
}

int run_check(const Options& o, std::ostream& out) {
  const auto lp = load_profile(o);
  const ChemoParams params{o.chi, o.sigma};
  BoundsReport rep;
  const Field& u = lp.u;
  rep.add("upper_bound", "max u <= max{1, (1 - chi/sigma)^-1}", u.max(), params.upper_bound_u(), 1e-6);
  rep.append(monotonicity_check(u, params));
  {
    double s = 0.0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < u.size() && u.grid.x(i) <= u.grid.x_min + 5.0; ++i, ++k) s += u[i];
    rep.add("left_plateau", "mean of u over the leftmost 5 units within 0.05 of 1",
            std::abs(s / static_cast<double>(k) - 1.0), 0.05);
  }
  const std::string decay_claim = "u decays exponentially: fitted rate mu > 0";
  try {
    const auto fit = decay_fit(u, 5.0, 10.0);
    rep.add("decay_rate_positive", decay_claim, -fit.mu, 0.0).note = "mu = " + format_double(fit.mu);
  } catch (const ValidationError& e) {
    rep.add_not_applicable("decay_rate_positive", decay_claim, e.what());
  }
  rep.append(advection_bounds_check(u, lp.v, lp.vx, params, 2.0 * u.grid.dx()));
  if (params.chi != 0.0) rep.append(moment_check(lp.v, params));
  double c = o.c;
  if (std::isnan(c) && lp.meta.contains("c")) c = lp.meta["c"].get<double>();
  if (!std::isnan(c)) rep.append(integral_identity_check(c, u));
  if (params.chi != 0.0) {
    const auto fam = poincare_test_family(u.grid, cell_seed(params.chi, params.sigma));
    rep.append(poincare_check(fam, u, lp.v, lp.vx, params, o.theta));
  }
  if (params.chi < 0.0 && !std::isnan(o.R)) {
    const auto geom = front_geometry(u, o.theta, params.sigma, o.R);
    rep.append(advection_plateau_check(u, lp.v, geom, params, o.eps));
  }
  json j = {{"command", "check"},
            {"version", version()},
            {"config", {{"input", o.input}, {"chi", o.chi}, {"sigma", o.sigma}, {"kernel", o.kernel},
                        {"theta", o.theta}}},
            {"checks", rep.to_json()},
            {"failures", rep.failures()}};
  const std::string path = resolve_out(o.out, "check.json");
  write_json(path, j);
  out << "check: " << rep.checks.size() << " checks, " << rep.failures() << " failed -> " << path << "\n";
  return kExitOk;
}

}  // namespace

int parse_and_dispatch(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Traveling waves of the nonlocal FKPP-chemotaxis equation", "chemowave"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  auto* evolve_cmd = app.add_subcommand("evolve", "time-dependent run and front speed");
  auto* slab_cmd = app.add_subcommand("slab", "finite-slab traveling wave");
  auto* eigen_cmd = app.add_subcommand("eigen", "periodic principal eigenpair of the wave potential");
  auto* scan_cmd = app.add_subcommand("scan", "phase-diagram sweep over (chi, sigma)");
  auto* check_cmd = app.add_subcommand("check", "diagnostics on a profile CSV");
  for (auto* s : {evolve_cmd, slab_cmd, eigen_cmd, scan_cmd, check_cmd}) add_common(s, o);
  add_evolve_opts(evolve_cmd, o);
  add_slab_opts(slab_cmd, o);
  add_slab_opts(eigen_cmd, o);
  eigen_cmd->add_option("--input", o.input, "profile CSV (x,u,v,v_x); solves a slab when absent");
  eigen_cmd->add_option("--c-test", o.c_test, "speed used to assemble the potential");
  add_slab_opts(scan_cmd, o);
  add_evolve_opts(scan_cmd, o);
  scan_cmd->add_option("--chi-list", o.chi_list, "comma-separated chi values");
  scan_cmd->add_option("--sigma-list", o.sigma_list, "comma-separated sigma values");
  scan_cmd->add_option("--mode", o.mode, "slab | evolve | both");
  check_cmd->add_option("--input", o.input, "profile CSV")->required();
  check_cmd->add_option("--c", o.c, "wave speed for the integral identity (default: from the sidecar)");
  check_cmd->add_option("--eps", o.eps, "eps for the advection plateau check");
  check_cmd->add_option("--R", o.R, "plateau reach R (enables the front-geometry checks)");

  try {
    std::vector<std::string> args = args_in;
    // Config values go right after the subcommand so later flags win.
    for (std::size_t i = 0; i < args.size(); ++i) {
      std::string path;
      if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
      else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
      if (!path.empty() && !args.empty()) {
        auto extra = config_args(path);
        args.insert(args.begin() + 1, extra.begin(), extra.end());
        break;
      }
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitValidation;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (*evolve_cmd) return run_evolve(o, out);
    if (*slab_cmd) return run_slab(o, out);
    if (*eigen_cmd) return run_eigen(o, out);
    if (*scan_cmd) return run_scan_cmd(o, out);
    if (*check_cmd) return run_check(o, out);
    return kExitValidation;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace chemowave
