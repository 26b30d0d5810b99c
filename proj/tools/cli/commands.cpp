#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "eulerspec/errors.hpp"
#include "eulerspec/flow_io.hpp"
#include "eulerspec/report_io.hpp"
#include "eulerspec/verify.hpp"
#include "eulerspec/version.hpp"

namespace eulerspec::cli {
namespace fs = std::filesystem;

fs::path resolve_output_dir(const fs::path& requested) {
  if (!requested.empty()) return requested;
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
  return "eulerspec-out";
}

namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Per-run state shared by every command: the flow, where files go, and the
// provenance stamped on each of them.
struct Run {
  RunConfig config;
  FourierFlow flow;
  fs::path dir;
  std::string hash;

  Run(RunConfig c, const char* command) : config(std::move(c)), flow(build_flow(config.flow)) {
    config.command = command;
    config.plan.horizon = config.T;
    dir = resolve_output_dir(config.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    if (!config.flow.file.empty()) {
      // Keep a copy of the modes beside the outputs so the persisted config
      // does not depend on the original file staying put.
      const fs::path copy = fs::absolute(dir / "flow.json");
      write(copy.filename().string(), flow_to_json(flow).dump(2) + "\n");
      config.flow.file = copy;
    }
  }

  // Call once every field that affects results is final.
  void seal() {
    hash = config_hash(config_json(config, flow));
    std::ostringstream toml;
    write_config_toml(toml, config);
    write("config.toml", toml.str());
  }

  void write(const std::string& name, const std::string& text) const {
    const fs::path path = dir / name;
    std::ofstream os(path, std::ios::binary);
    os << text;
    if (!os) throw IoError("cannot write " + path.string());
  }

  void write_json(const std::string& name, nlohmann::json doc) const {
    doc["eulerspec_version"] = kVersion;
    doc["config_hash"] = hash;
    write(name, doc.dump(2) + "\n");
  }

  template <typename Writer>
  void write_csv(const std::string& name, Writer&& body) const {
    std::ostringstream os;
    os << "# eulerspec " << kVersion << " config " << hash << '\n';
    body(os);
    write(name, os.str());
  }

  nlohmann::json flow_json() const {
    nlohmann::json j = flow_to_json(flow);
    return j;
  }
};

Vec3 unit_direction(const Vec3& xi0) {
  const double n = xi0.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw ValidationError("xi0 must be a nonzero finite vector");
  return xi0 / n;
}

void print_drift(std::ostream& out, const DriftReport& d) {
  out << "  H drift              " << d.max_H_drift << '\n'
      << "  b.xi drift           " << d.max_bxi_drift << '\n'
      << "  |det J - 1|          " << d.det_jacobian_err << '\n'
      << "  xi direction angle   " << d.xi_consistency_angle << '\n'
      << "  xi magnitude error   " << d.xi_magnitude_err << '\n'
      << "  round trip error     " << d.group_roundtrip_err << '\n';
}

}  // namespace

int cmd_check_flow(RunConfig config, std::ostream& out) {
  Run run(std::move(config), "check-flow");
  run.seal();
  const int grid = run.config.steady_grid > 0 ? run.config.steady_grid : default_steady_grid(run.flow);
  const SteadinessReport report = check_steady_euler(run.flow, grid, run.config.steady_tol);
  run.write_json("check.json", {{"flow", run.flow_json()}, {"steadiness", to_json(report)}});
  out << run.flow.name() << ": " << report.summary() << '\n';
  return report.passed ? 0 : 2;
}

int cmd_trace(RunConfig config, std::ostream& out) {
  Run run(std::move(config), "trace");
  run.seal();
  const RunConfig& c = run.config;
  const Vec3 xi0 = unit_direction(c.xi0);
  const FiberFrame frame = init_fiber_frame(xi0, c.exponents.frame_seed);
  const TrajectoryRecord record = integrate_bas(run.flow, c.x0, xi0, frame, c.T, c.exponents.integrator, c.cadence);
  const DriftReport audit = audit_trajectory(run.flow, c.x0, xi0, frame, c.T, c.exponents.integrator);

  run.write_csv("trajectory.csv", [&](std::ostream& os) { write_trajectory_csv(os, record); });
  run.write_json("audit.json", {{"flow", run.flow_json()},
                                {"initial", {{"x0", to_json(c.x0)}, {"xi0", to_json(xi0)}}},
                                {"T", c.T},
                                {"report", to_json(audit)},
                                {"trajectory", to_json(record.diagnostics)}});

  out << "traced " << record.samples.size() << " samples to t = " << record.final_state.t << " ("
      << record.diagnostics.steps.accepted << " steps)\n";
  print_drift(out, audit);
  return 0;
}

int cmd_exponents(RunConfig config, std::ostream& out) {
  Run run(std::move(config), "exponents");
  run.seal();
  const RunConfig& c = run.config;
  const Vec3 xi0 = unit_direction(c.xi0);
  const ExponentSample s = evolve_exponents(run.flow, c.x0, xi0, c.T, c.exponents, c.plan.checkpoints);

  run.write_csv("samples.csv", [&](std::ostream& os) { write_samples_csv(os, std::span(&s, 1)); });
  run.write_json("exponents.json", {{"flow", run.flow_json()}, {"sample", to_json(s)}});
  out.precision(10);
  out << "lambda1 = " << s.lambda1 << "\nlambda2 = " << s.lambda2 << "\n(T = " << s.T << ", "
      << s.reorth_count << " re-orthonormalizations)\n";
  return 0;
}

int cmd_spectrum(RunConfig config, std::ostream& out) {
  Run run(std::move(config), "spectrum");
  RunConfig& c = run.config;
  if (c.plan.checkpoints.empty()) {
    const double T = std::abs(c.T);
    c.plan.checkpoints = {T / 8.0, T / 4.0, T / 2.0};
  }
  run.seal();

  SpectrumControls controls;
  controls.exponents = c.exponents;
  controls.threads = c.threads;
  controls.gap_resolution = c.gap_resolution;
  controls.steady_tol = c.steady_tol;
  const SpectrumEstimate est = estimate_spectrum(run.flow, c.plan, controls);

  std::vector<AnnulusReport> rings;
  for (double t : c.annulus_times) rings.push_back(annulus(est, t));

  // Audit one representative trajectory so the estimate carries its own check.
  const InitialCondition first = sample_plan(run.flow, c.plan).front();
  const double audit_T = std::copysign(std::min(std::abs(c.T), 50.0), c.T);
  const DriftReport audit = audit_trajectory(run.flow, first.x0, first.xi0,
                                             init_fiber_frame(first.xi0, c.exponents.frame_seed), audit_T,
                                             c.exponents.integrator);

  nlohmann::json convergence = nlohmann::json::array();
  for (const ConvergencePoint& p : est.convergence) {
    convergence.push_back({{"T", p.T}, {"mu_hat", p.mu_hat}, {"M_hat", p.M_hat}});
  }
  nlohmann::json cover = nlohmann::json::array();
  for (const Interval& iv : est.interval_cover) cover.push_back({iv.lo, iv.hi});
  nlohmann::json ring_json = nlohmann::json::array();
  for (const AnnulusReport& r : rings) ring_json.push_back(to_json(r));
  nlohmann::json failures = nlohmann::json::array();
  for (const SampleFailure& f : est.failures) failures.push_back({{"index", f.index}, {"error", f.what}});

  run.write_csv("samples.csv", [&](std::ostream& os) { write_samples_csv(os, est.samples); });
  run.write_csv("intervals.csv", [&](std::ostream& os) { write_interval_strips_csv(os, est.samples); });
  run.write_csv("annulus.csv", [&](std::ostream& os) { write_annulus_csv(os, rings); });
  run.write_json("estimate.json", {{"flow", run.flow_json()},
                                   {"plan", to_json(c.plan)},
                                   {"mu_hat", est.mu_hat},
                                   {"M_hat", est.M_hat},
                                   {"interval_cover", cover},
                                   {"gap_report", to_json(est.gap_report)},
                                   {"convergence", convergence},
                                   {"annulus", ring_json},
                                   {"attempted", est.attempted},
                                   {"failures", failures},
                                   {"audit", {{"x0", to_json(first.x0)},
                                              {"xi0", to_json(first.xi0)},
                                              {"T", audit_T},
                                              {"report", to_json(audit)}}}});

  out.precision(10);
  out << run.flow.name() << ": " << est.samples.size() << "/" << est.attempted << " samples, T = " << c.T << '\n'
      << "  mu_hat = " << est.mu_hat << "\n  M_hat  = " << est.M_hat << '\n'
      << "  connectedness at resolution " << est.gap_report.resolution << ": "
      << (est.gap_report.passed ? "no gap" : "gap of " + std::to_string(est.gap_report.largest_gap)) << '\n';
  for (const AnnulusReport& r : rings) {
    out << "  annulus t = " << r.t << ": [" << r.r_inner << ", " << r.r_outer << "]\n";
  }
  return 0;
}

int cmd_audit(RunConfig config, std::ostream& out) {
  Run run(std::move(config), "audit");
  run.seal();
  const RunConfig& c = run.config;
  const Vec3 xi0 = unit_direction(c.xi0);
  const DriftReport report =
      audit_trajectory(run.flow, c.x0, xi0, init_fiber_frame(xi0, c.exponents.frame_seed), c.T, c.exponents.integrator);
  const HalvingStudy study = step_halving_study(run.flow, c.x0, xi0, c.T, c.halving_tolerances, c.exponents);

  run.write_csv("halving.csv", [&](std::ostream& os) { write_halving_csv(os, study); });
  run.write_json("audit.json", {{"flow", run.flow_json()},
                                {"initial", {{"x0", to_json(c.x0)}, {"xi0", to_json(xi0)}}},
                                {"T", c.T},
                                {"report", to_json(report)},
                                {"halving", to_json(study)}});
  out << "audit of " << run.flow.name() << " to T = " << c.T << '\n';
  print_drift(out, report);
  out << "  step halving         " << (study.passed ? "consistent" : "NOT monotone") << '\n';
  return 0;
}

namespace {

Vec3 to_vec3(const std::vector<std::string>& v) {
  if (v.size() != 3) throw ValidationError("expected three components");
  return Vec3(parse_real(v[0]), parse_real(v[1]), parse_real(v[2]));
}

std::vector<double> to_reals(const std::vector<std::string>& v) {
  std::vector<double> out;
  for (const std::string& s : v) out.push_back(parse_real(s));
  return out;
}

// Real-valued options go through parse_real rather than CLI11's own
// conversion, which reads via long double and can round twice.
void real_option(CLI::App& app, const std::string& name, double& target, const std::string& help) {
  app.add_option_function<std::string>(name, [&target](const std::string& s) { target = parse_real(s); }, help)
      ->default_str(format_real(target));
}

void vec3_option(CLI::App& app, const std::string& name, Vec3& target, const std::string& help) {
  app.add_option_function<std::vector<std::string>>(
         name, [&target](const std::vector<std::string>& v) { target = to_vec3(v); }, help)
      ->expected(3);
}

void reals_option(CLI::App& app, const std::string& name, std::vector<double>& target, const std::string& help) {
  app.add_option_function<std::vector<std::string>>(
         name, [&target](const std::vector<std::string>& v) { target = to_reals(v); }, help)
      ->expected(1, 1 << 20);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Amplitude-cocycle spectra of steady Euler flows on the 3-torus", "eulerspec"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "TOML configuration; flags given on the command line take precedence");
  app.fallthrough();
  app.require_subcommand(1, 1);

  app.add_option_function<std::string>(
      "--flow", [&](const std::string& s) { cfg.flow.catalog = s; }, "catalog flow: abc, shear or kolmogorov");
  app.add_option("--flow-file", cfg.flow.file, "JSON flow definition (overrides --flow)");
  vec3_option(app, "--abc", cfg.flow.abc, "ABC coefficients A B C");
  vec3_option(app, "--shear-u", cfg.flow.shear, "constant velocity of the shear flow");
  real_option(app, "--amplitude", cfg.flow.amplitude, "Kolmogorov amplitude");
  vec3_option(app, "--x0", cfg.x0, "initial position");
  vec3_option(app, "--xi0", cfg.xi0, "initial wave vector (normalized before use)");
  real_option(app, "-T,--horizon", cfg.T, "integration horizon; negative runs backward");
  real_option(app, "--cadence", cfg.cadence, "trajectory sampling interval (0: endpoints only)");

  app.add_option("--count", cfg.plan.count, "number of spectrum samples");
  app.add_option_function<std::string>(
      "--strategy", [&](const std::string& s) { cfg.plan.strategy = parse_strategy(s); },
      "lattice, low-discrepancy or random");
  app.add_option("--seed", cfg.plan.seed, "sampling seed");
  app.add_option_function<std::string>(
      "--constraint", [&](const std::string& s) { cfg.plan.constraint = parse_constraint(s); },
      "none or omega_perp");
  reals_option(app, "--checkpoints", cfg.plan.checkpoints, "times for the convergence series");
  app.add_option("--stagnation-directions", cfg.plan.stagnation_directions,
                 "omega_perp: sphere directions added at each stagnation point");

  real_option(app, "--rtol", cfg.exponents.integrator.rtol, "relative tolerance");
  real_option(app, "--atol", cfg.exponents.integrator.atol, "absolute tolerance");
  real_option(app, "--initial-step", cfg.exponents.integrator.initial_step, "first step (0: automatic)");
  real_option(app, "--max-step", cfg.exponents.integrator.max_step, "largest step");
  app.add_option("--max-steps", cfg.exponents.integrator.max_steps, "step budget per integration");
  real_option(app, "--reorth-interval", cfg.exponents.reorth_interval, "time between re-orthonormalizations");
  real_option(app, "--max-condition", cfg.exponents.max_condition, "frame condition forcing early re-orthonormalization");
  app.add_option("--frame-seed", cfg.exponents.frame_seed, "seed of the initial fiber frame");

  app.add_option("--threads", cfg.threads, "worker threads (0: all cores)");
  real_option(app, "--gap-resolution", cfg.gap_resolution, "connectedness resolution (0: 2/sqrt|T|)");
  real_option(app, "--steady-tol", cfg.steady_tol, "steadiness residual tolerance");
  app.add_option("--steady-grid", cfg.steady_grid, "steadiness grid points per axis (0: automatic)");
  reals_option(app, "--annulus-t", cfg.annulus_times, "times at which to report the spectral annulus");
  reals_option(app, "--halving-tol", cfg.halving_tolerances, "tolerance ladder for the step-halving study");
  app.add_option("-o,--output", cfg.output_dir, "output directory (default: $EULERSPEC_OUTPUT_DIR or ./eulerspec-out)");

  CLI::App* check = app.add_subcommand("check-flow", "verify the flow is a steady, divergence-free Euler solution");
  CLI::App* trace = app.add_subcommand("trace", "integrate one bicharacteristic with its amplitude frame");
  CLI::App* exps = app.add_subcommand("exponents", "finite-time exponents of a single sample");
  CLI::App* spec = app.add_subcommand("spectrum", "estimate the exponent interval from a sample plan");
  CLI::App* audit = app.add_subcommand("audit", "conservation audit and step-halving study");

  std::vector<const char*> argv{"eulerspec"};
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? 0 : 2;
    }
    if (check->parsed()) return cmd_check_flow(cfg, out);
    if (trace->parsed()) return cmd_trace(cfg, out);
    if (exps->parsed()) return cmd_exponents(cfg, out);
    if (spec->parsed()) return cmd_spectrum(cfg, out);
    if (audit->parsed()) return cmd_audit(cfg, out);
    return 2;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace eulerspec::cli
