#include "eulerspec/spectrum.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <thread>

#include "eulerspec/errors.hpp"

namespace eulerspec {

std::vector<Interval> merge_intervals(std::vector<Interval> intervals) {
  std::sort(intervals.begin(), intervals.end(), [](const Interval& a, const Interval& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
  });
  std::vector<Interval> merged;
  for (const Interval& iv : intervals) {
    if (!merged.empty() && iv.lo <= merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, iv.hi);
    } else {
      merged.push_back(iv);
    }
  }
  return merged;
}

GapReport connectedness_diagnostic(std::span<const Interval> intervals, double resolution) {
  if (intervals.size() < 2) throw ValidationError("connectedness diagnostic needs at least two samples");
  if (!(resolution >= 0.0)) throw ValidationError("gap resolution must be non-negative");

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  std::vector<Interval> inflated;
  inflated.reserve(intervals.size());
  for (const Interval& iv : intervals) {
    lo = std::min(lo, iv.lo);
    hi = std::max(hi, iv.hi);
    inflated.push_back({iv.lo - resolution, iv.hi + resolution});
  }

  GapReport report;
  report.resolution = resolution;
  report.cover = merge_intervals(std::move(inflated));
  for (std::size_t i = 1; i < report.cover.size(); ++i) {
    const double a = std::max(report.cover[i - 1].hi, lo);
    const double b = std::min(report.cover[i].lo, hi);
    if (b - a > report.largest_gap) {
      report.largest_gap = b - a;
      report.gap_lo = a;
      report.gap_hi = b;
    }
  }
  report.passed = report.largest_gap == 0.0;
  return report;
}

GapReport connectedness_diagnostic(const SpectrumEstimate& estimate, double resolution) {
  std::vector<Interval> intervals;
  intervals.reserve(estimate.samples.size());
  for (const ExponentSample& s : estimate.samples) intervals.push_back({s.lambda2, s.lambda1});
  return connectedness_diagnostic(intervals, resolution);
}

SpectrumEstimate aggregate_samples(std::vector<ExponentSample> samples, double gap_resolution) {
  if (samples.empty()) throw NumericalError("no successful samples to aggregate");

  SpectrumEstimate est;
  est.samples = std::move(samples);
  est.mu_hat = std::numeric_limits<double>::infinity();
  est.M_hat = -std::numeric_limits<double>::infinity();
  std::vector<Interval> raw;
  for (const ExponentSample& s : est.samples) {
    est.mu_hat = std::min(est.mu_hat, s.lambda2);
    est.M_hat = std::max(est.M_hat, s.lambda1);
    raw.push_back({s.lambda2, s.lambda1});
  }
  est.interval_cover = merge_intervals(raw);

  if (est.samples.size() >= 2) {
    est.gap_report = connectedness_diagnostic(raw, gap_resolution);
  } else {
    est.gap_report.resolution = gap_resolution;
    est.gap_report.cover = {{raw[0].lo - gap_resolution, raw[0].hi + gap_resolution}};
  }

  const std::size_t n_checkpoints = est.samples.front().convergence_tail.size();
  for (std::size_t j = 0; j < n_checkpoints; ++j) {
    ConvergencePoint p{est.samples.front().convergence_tail[j].t, std::numeric_limits<double>::infinity(),
                       -std::numeric_limits<double>::infinity()};
    for (const ExponentSample& s : est.samples) {
      if (s.convergence_tail.size() != n_checkpoints || s.convergence_tail[j].t != p.T) {
        throw NumericalError("samples do not share a checkpoint schedule");
      }
      p.mu_hat = std::min(p.mu_hat, s.convergence_tail[j].lambda2);
      p.M_hat = std::max(p.M_hat, s.convergence_tail[j].lambda1);
    }
    est.convergence.push_back(p);
  }
  return est;
}

SpectrumEstimate estimate_spectrum(const FourierFlow& flow, const SamplePlan& plan, const SpectrumControls& controls) {
  if (!(plan.horizon != 0.0) || !std::isfinite(plan.horizon)) {
    throw ValidationError("spectrum horizon must be finite and nonzero");
  }
  const SteadinessReport steady = check_steady_euler(flow, default_steady_grid(flow), controls.steady_tol);
  if (!steady.passed) throw ValidationError("flow '" + flow.name() + "' is not a steady Euler flow: " + steady.summary());

  const std::vector<InitialCondition> ics = sample_plan(flow, plan);
  std::vector<double> checkpoints = plan.checkpoints;
  if (checkpoints.empty()) {
    const double T = std::abs(plan.horizon);
    checkpoints = {T / 8.0, T / 4.0, T / 2.0};
  }

  std::vector<std::optional<ExponentSample>> results(ics.size());
  std::vector<std::string> errors(ics.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < ics.size(); i = next++) {
      try {
        results[i] = evolve_exponents(flow, ics[i].x0, ics[i].xi0, plan.horizon, controls.exponents, checkpoints);
      } catch (const NumericalError& e) {
        errors[i] = e.what();
      }
    }
  };

  unsigned threads = controls.threads != 0 ? controls.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, ics.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
  }

  // Sequential reduction in plan order, independent of completion order.
  std::vector<ExponentSample> ok;
  std::vector<SampleFailure> failures;
  for (std::size_t i = 0; i < ics.size(); ++i) {
    if (results[i]) {
      ok.push_back(std::move(*results[i]));
    } else {
      failures.push_back({i, errors[i]});
    }
  }
  if (failures.size() * 10 > ics.size()) {
    throw NumericalError(std::to_string(failures.size()) + " of " + std::to_string(ics.size()) +
                         " samples failed; first: " + failures.front().what);
  }

  const double resolution =
      controls.gap_resolution > 0.0 ? controls.gap_resolution : default_gap_resolution(plan.horizon);
  SpectrumEstimate est = aggregate_samples(std::move(ok), resolution);
  est.failures = std::move(failures);
  est.attempted = ics.size();
  return est;
}

AnnulusReport annulus(const SpectrumEstimate& estimate, double t) {
  return AnnulusReport{t, std::exp(t * estimate.mu_hat), std::exp(t * estimate.M_hat)};
}

}  // namespace eulerspec
