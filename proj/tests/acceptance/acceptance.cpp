// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "eulerspec/spectrum.hpp"
#include "eulerspec/verify.hpp"

namespace {

using namespace eulerspec;
namespace fs = std::filesystem;

struct Outcome {
  bool passed;
  std::string detail;
};

struct Criterion {
  std::string name;
  double time_limit;  // seconds
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Vec3 random_unit(std::mt19937_64& rng) {
  for (;;) {
    const Vec3 v(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1));
    if (v.norm() > 0.1 && v.norm() <= 1.0) return v.normalized();
  }
}

ExponentControls controls_at(double tol, std::uint64_t frame_seed) {
  ExponentControls c;
  c.integrator.rtol = tol;
  c.integrator.atol = tol * 1e-2;
  c.frame_seed = frame_seed;
  return c;
}

// ---------------------------------------------------------------------------

Outcome shear_regression() {
  bool ok = true;
  std::string detail;
  for (double U : {1.0, 2.5}) {
    SamplePlan plan;
    plan.count = 50;
    plan.horizon = 100.0;
    const SpectrumEstimate est = estimate_spectrum(make_shear_flow(Vec3(U, 0, 0)), plan, {});
    bool ledgers_still = true;
    for (const ExponentSample& s : est.samples) {
      ledgers_still = ledgers_still && s.lambda1 == 0.0 && s.lambda2 == 0.0 && s.log_volume == 0.0;
    }
    bool unit_circle = true;
    for (double t : {1.0, 5.0}) {
      const AnnulusReport a = annulus(est, t);
      unit_circle = unit_circle && a.r_inner == 1.0 && a.r_outer == 1.0;
    }
    const bool this_ok = est.samples.size() == 50 && est.mu_hat == 0.0 && est.M_hat == 0.0 && ledgers_still &&
                         unit_circle;
    ok = ok && this_ok;
    detail += fmt("U=%g: mu=%g M=%g ledgers %s annulus %s; ", U, est.mu_hat, est.M_hat,
                  ledgers_still ? "zero" : "MOVED", unit_circle ? "(1,1)" : "NOT (1,1)");
  }
  return {ok, detail};
}

Outcome conservation_suite() {
  const FourierFlow flow = make_abc_flow(1, 1, 1);
  SamplePlan plan;
  plan.count = 20;
  IntegratorControls ic;
  ic.rtol = 1e-10;
  double H = 0, bxi = 0, det = 0, angle = 0;
  for (const InitialCondition& p : sample_omega(plan)) {
    const DriftReport d = audit_trajectory(flow, p.x0, p.xi0, init_fiber_frame(p.xi0, 0), 50.0, ic);
    H = std::max(H, d.max_H_drift);
    bxi = std::max(bxi, d.max_bxi_drift);
    det = std::max(det, d.det_jacobian_err);
    angle = std::max(angle, d.xi_consistency_angle);
  }
  const bool ok = H <= 1e-7 && bxi <= 1e-7 && det <= 1e-6 && angle <= 1e-6;
  return {ok, fmt("max |H-H0| %.2e, |b.xi| %.2e, |det-1| %.2e, angle %.2e rad", H, bxi, det, angle)};
}

Outcome cocycle_identity() {
  std::mt19937_64 rng(3);
  const double pairs[3][2] = {{1, 1}, {0.5, 2}, {2, 3}};
  const ExponentControls c;
  double worst = 0;
  for (int i = 0; i < 10; ++i) {
    const FourierFlow flow = make_abc_flow(uniform(rng, 0.3, 1.5), uniform(rng, 0.3, 1.5), uniform(rng, 0.3, 1.5));
    const Vec3 x0(uniform(rng, 0, kTwoPi), uniform(rng, 0, kTwoPi), uniform(rng, 0, kTwoPi));
    const Vec3 xi0 = random_unit(rng);
    const double s = pairs[i % 3][0], t = pairs[i % 3][1];

    const CocycleMatrix Ms = cocycle_matrix(flow, x0, xi0, s, c);
    const CocycleMatrix Mt = cocycle_matrix(flow, Ms.x, Ms.xi_dir, t, c);
    const CocycleMatrix Mst = cocycle_matrix(flow, x0, xi0, s + t, c);
    Eigen::Matrix<double, 3, 2> Es, F0, Ft, Est;
    Es << Ms.e1, Ms.e2;
    F0 << Mt.initial_e1, Mt.initial_e2;
    Ft << Mt.e1, Mt.e2;
    Est << Mst.e1, Mst.e2;
    // Express both sides in the basis of the fiber at time s + t.
    const Mat2 align = Est.transpose() * Ft;
    const Mat2 composed = align * Mt.matrix * (F0.transpose() * Es) * Ms.matrix;
    worst = std::max(worst, (composed - Mst.matrix).cwiseAbs().maxCoeff());
  }
  return {worst <= 1e-6, fmt("worst entry-wise defect %.2e over 10 cases", worst)};
}

Outcome kolmogorov_oracle_check() {
  std::mt19937_64 rng(4);
  const IntegratorControls ic;
  double worst = 0;
  for (int i = 0; i < 10; ++i) {
    const double a = uniform(rng, 0.5, 2.0);
    const Vec3 x0(uniform(rng, 0, kTwoPi), uniform(rng, 0, kTwoPi), uniform(rng, 0, kTwoPi));
    const Vec3 xi0 = random_unit(rng);
    const FiberFrame frame = init_fiber_frame(xi0, 0);
    const TrajectoryRecord r = integrate_bas(make_kolmogorov_flow(a), x0, xi0, frame, 10.0, ic);
    const BasState exact = kolmogorov_oracle(a, x0, xi0, frame, 10.0);
    const double scale = std::max(1.0, std::max(exact.frame.b1.norm(), exact.frame.b2.norm()));
    worst = std::max({worst, (r.final_state.x - exact.x).cwiseAbs().maxCoeff(),
                      (r.final_state.xi_dir - exact.xi_dir).cwiseAbs().maxCoeff(),
                      std::abs(r.final_state.log_xi - exact.log_xi),
                      (r.final_state.frame.b1 - exact.frame.b1).cwiseAbs().maxCoeff() / scale,
                      (r.final_state.frame.b2 - exact.frame.b2).cwiseAbs().maxCoeff() / scale});
  }

  const double T = 1000.0;
  const double bound = 10.0 * std::log(T) / T;
  double lam = 0;
  std::vector<std::pair<Vec3, Vec3>> starts = {{Vec3(0, std::numbers::pi / 3, 0), Vec3::UnitY()}};
  for (int i = 0; i < 4; ++i) {
    starts.emplace_back(Vec3(uniform(rng, 0, kTwoPi), uniform(rng, 0, kTwoPi), uniform(rng, 0, kTwoPi)),
                        random_unit(rng));
  }
  for (const auto& [x0, xi0] : starts) {
    const ExponentSample s = evolve_exponents(make_kolmogorov_flow(1.0), x0, xi0, T, {});
    lam = std::max({lam, std::abs(s.lambda1), std::abs(s.lambda2)});
  }
  const bool ok = worst <= 1e-8 && lam <= bound;
  return {ok, fmt("oracle mismatch %.2e at T=10; max |lambda| %.2e <= %.2e at T=1000", worst, lam, bound)};
}

// Shared by criteria 5-7.
struct AbcRuns {
  std::vector<SpectrumEstimate> estimates;  // (1e-8, 0), (1e-8, 1), (1e-11, 0), (1e-11, 1)
  std::vector<std::string> labels;
};

AbcRuns& abc_runs() {
  static AbcRuns runs;
  return runs;
}

SamplePlan abc_plan() {
  SamplePlan plan;
  plan.count = 200;
  plan.horizon = 1000.0;
  return plan;
}

Outcome abc_positivity() {
  const FourierFlow flow = make_abc_flow(1, 1, 1);
  AbcRuns& runs = abc_runs();
  for (double tol : {1e-8, 1e-11}) {
    for (std::uint64_t seed : {0u, 1u}) {
      SpectrumControls c;
      c.exponents = controls_at(tol, seed);
      runs.estimates.push_back(estimate_spectrum(flow, abc_plan(), c));
      runs.labels.push_back(fmt("tol %.0e seed %d", tol, static_cast<int>(seed)));
    }
  }
  double lo = 1e300, hi = -1e300;
  bool positive = true;
  std::string detail = "M_hat:";
  for (std::size_t i = 0; i < runs.estimates.size(); ++i) {
    const double M = runs.estimates[i].M_hat;
    positive = positive && M > 0.0;
    lo = std::min(lo, M);
    hi = std::max(hi, M);
    detail += fmt(" %.5f (%s)", M, runs.labels[i].c_str());
  }
  detail += fmt("; spread %.4f", hi - lo);
  return {positive && hi - lo <= 0.01, detail};
}

Outcome connectedness() {
  const AbcRuns& runs = abc_runs();
  if (runs.estimates.empty()) return {false, "criterion 5 did not produce estimates"};
  bool ok = true;
  std::string detail;
  for (std::size_t i = 0; i < runs.estimates.size(); ++i) {
    const GapReport& g = runs.estimates[i].gap_report;
    ok = ok && g.passed;
    detail += fmt("gap %.3g at res %.4f (%s); ", g.largest_gap, g.resolution, runs.labels[i].c_str());
  }
  const std::vector<Interval> control = {{-0.5, -0.3}, {0.3, 0.5}};
  const GapReport neg = connectedness_diagnostic(control, default_gap_resolution(1000.0));
  ok = ok && !neg.passed;
  detail += fmt("negative control %s (gap %.3f)", neg.passed ? "PASSED (wrong)" : "fails as required", neg.largest_gap);
  return {ok, detail};
}

Outcome omega_perp() {
  const FourierFlow flow = make_abc_flow(1, 1, 1);
  SamplePlan plan = abc_plan();
  plan.constraint = SampleConstraint::omega_perp;

  double worst_H = 0;
  for (const InitialCondition& p : sample_omega_perp(flow, plan)) {
    const TrajectoryRecord r = integrate_bas(flow, p.x0, p.xi0, init_fiber_frame(p.xi0, 0), 20.0, {}, 0.5);
    for (const TrajectorySample& s : r.samples) worst_H = std::max(worst_H, std::abs(s.H));
    worst_H = std::max(worst_H, std::abs(hamiltonian(flow, p.x0, p.xi0)) + r.diagnostics.max_H_drift);
  }

  const AbcRuns& runs = abc_runs();
  if (runs.estimates.empty()) return {false, "criterion 5 did not produce estimates"};
  const SpectrumEstimate& full = runs.estimates[0];
  SpectrumControls c;
  c.exponents = controls_at(1e-8, 0);
  const SpectrumEstimate perp = estimate_spectrum(flow, plan, c);
  const bool inside = perp.mu_hat >= full.mu_hat - 0.02 && perp.M_hat <= full.M_hat + 0.02;
  return {worst_H <= 1e-8 && inside,
          fmt("max |H| %.2e over T=20; perp [%.5f, %.5f] vs full [%.5f, %.5f]", worst_H, perp.mu_hat, perp.M_hat,
              full.mu_hat, full.M_hat)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome reproducibility() {
  const fs::path root = fs::temp_directory_path() / "eulerspec-acceptance-replay";
  fs::remove_all(root);
  const std::vector<std::pair<std::string, std::vector<std::string>>> runs = {
      {"check.json", {"check-flow", "--flow", "abc", "--abc", "1", "0.5", "0.25"}},
      {"audit.json", {"trace", "--flow", "abc", "-T", "20", "--xi0", "0.3", "0.4", "0.5"}},
      {"exponents.json", {"exponents", "--flow", "kolmogorov", "--amplitude", "1.5", "-T", "50"}},
      {"estimate.json", {"spectrum", "--flow", "abc", "--count", "16", "-T", "100", "--strategy", "random", "--seed",
                         "17", "--rtol", "1e-9", "--annulus-t", "0", "1", "5"}},
      {"estimate.json", {"spectrum", "--flow", "abc", "--count", "8", "-T", "50", "--constraint", "omega_perp",
                         "--stagnation-directions", "2"}},
      {"audit.json", {"audit", "--flow", "abc", "-T", "5"}},
  };
  bool ok = true;
  int identical = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& [file, args] = runs[i];
    const fs::path first = root / ("run" + std::to_string(i));
    const fs::path second = root / ("replay" + std::to_string(i));
    std::ostringstream sink;
    auto a = args;
    a.insert(a.end(), {"-o", first.string()});
    const int c1 = cli::run_cli(a, sink, sink);
    const int c2 = cli::run_cli({args[0], "--config", (first / "config.toml").string(), "-o", second.string()}, sink,
                                sink);
    const bool same = c1 == 0 && c2 == 0 && slurp(first / file) == slurp(second / file) &&
                      !slurp(first / file).empty();
    ok = ok && same;
    identical += same ? 1 : 0;
  }
  fs::remove_all(root);
  return {ok, fmt("%d/%zu replays bitwise identical", identical, runs.size())};
}

// Not a criterion: the same budget on the rigid lattice plan, reported so the
// choice of plan for criteria 5-6 is visible next to its alternative.
void lattice_note() {
  SamplePlan plan = abc_plan();
  plan.strategy = SampleStrategy::lattice;
  SpectrumControls c;
  c.exponents = controls_at(1e-8, 0);
  const SpectrumEstimate est = estimate_spectrum(make_abc_flow(1, 1, 1), plan, c);
  std::cout << fmt("INFO lattice plan: mu_hat %.5f M_hat %.5f, gap %.3f on [%.4f, %.4f]", est.mu_hat, est.M_hat,
                   est.gap_report.largest_gap, est.gap_report.gap_lo, est.gap_report.gap_hi)
            << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  const bool with_note = !(argc > 1 && std::string(argv[1]) == "--no-info");
  const std::vector<Criterion> criteria = {
      {"1 shear regression", 5, shear_regression},
      {"2 conservation suite", 30, conservation_suite},
      {"3 cocycle identity", 30, cocycle_identity},
      {"4 Kolmogorov oracle", 10, kolmogorov_oracle_check},
      {"5 ABC positivity and stability", 900, abc_positivity},
      {"6 connectedness", 5, connectedness},
      {"7 omega-perp mode", 120, omega_perp},
      {"8 reproducibility", 120, reproducibility},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds <= c.time_limit;
    const bool pass = o.passed && in_time;
    failed += pass ? 0 : 1;
    std::cout << (pass ? "PASS " : "FAIL ") << c.name << ": " << o.detail
              << fmt(" [%.1f s, limit %.0f s%s]", seconds, c.time_limit, in_time ? "" : ", EXCEEDED") << std::endl;
  }
  if (with_note) lattice_note();
  std::cout << (failed == 0 ? "all criteria passed" : fmt("%d criteria failed", failed)) << std::endl;
  return failed == 0 ? 0 : 1;
}
