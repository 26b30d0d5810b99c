#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eulerspec/lyapunov.hpp"

namespace eulerspec {

enum class SampleStrategy { lattice, low_discrepancy, random };
enum class SampleConstraint { none, omega_perp };

std::string to_string(SampleStrategy s);
std::string to_string(SampleConstraint c);
/// Throws ValidationError on unknown names.
SampleStrategy parse_strategy(const std::string& name);
SampleConstraint parse_constraint(const std::string& name);

/// How initial conditions on Ω = T³ × S² are drawn and how far they run.
struct SamplePlan {
  int count = 1;
  SampleStrategy strategy = SampleStrategy::low_discrepancy;
  std::uint64_t seed = 0;
  SampleConstraint constraint = SampleConstraint::none;
  double horizon = 100.0;
  /// Times at which every sample reports λ(t); the horizon is always added.
  std::vector<double> checkpoints;
  /// Under omega_perp: extra Fibonacci directions enumerated on the full
  /// sphere at every located stagnation point.
  int stagnation_directions = 0;
};

struct InitialCondition {
  Vec3 x0;
  Vec3 xi0;
};

/// i-th of n points of the Fibonacci spiral on the unit sphere.
Vec3 fibonacci_direction(int i, int n);

/// `count` points of Ω. Lattice pairs a uniform T³ grid with a Fibonacci set on
/// S²; low_discrepancy maps a 5-dimensional Halton sequence; random draws from
/// a seeded Mersenne Twister.
std::vector<InitialCondition> sample_omega(const SamplePlan& plan);

/// `count` points of Ω⊥ = {u(x)·ξ = 0}: ξ on the great circle ⊥ u(x0), or
/// anywhere on the sphere where |u(x0)| ≤ 1e-12. Adds the stagnation-sphere
/// directions requested by the plan.
std::vector<InitialCondition> sample_omega_perp(const FourierFlow& flow, const SamplePlan& plan);

/// Zeros of u found by damped Newton iteration from a seeds_per_axis³ grid,
/// reduced to [0, 2π)³, deduplicated, |u| ≤ 1e-12.
std::vector<Vec3> find_stagnation_points(const FourierFlow& flow, int seeds_per_axis = 8);

/// Dispatches on plan.constraint.
std::vector<InitialCondition> sample_plan(const FourierFlow& flow, const SamplePlan& plan);

struct Interval {
  double lo;
  double hi;
};

struct GapReport {
  double resolution = 0.0;
  /// Largest uncovered stretch of [mu_hat, M_hat]; 0 when connected.
  double largest_gap = 0.0;
  double gap_lo = 0.0;
  double gap_hi = 0.0;
  bool passed = true;
  /// Merged cover of the inflated intervals.
  std::vector<Interval> cover;
};

struct ConvergencePoint {
  double T;
  double mu_hat;
  double M_hat;
};

struct SampleFailure {
  std::size_t index;
  std::string what;
};

struct SpectrumControls {
  ExponentControls exponents;
  /// Worker threads; 0 uses the hardware concurrency.
  unsigned threads = 0;
  /// Gap resolution; 0 means 2/√|T|.
  double gap_resolution = 0.0;
  /// Steadiness gate applied before any integration.
  double steady_tol = kDefaultSteadyTol;
};

struct SpectrumEstimate {
  double mu_hat = 0.0;
  double M_hat = 0.0;
  /// Successful samples in plan order.
  std::vector<ExponentSample> samples;
  /// Sorted union of the raw per-sample [λ₂, λ₁].
  std::vector<Interval> interval_cover;
  GapReport gap_report;
  std::vector<ConvergencePoint> convergence;
  std::vector<SampleFailure> failures;
  std::size_t attempted = 0;
};

/// Runs evolve_exponents on every sampled initial condition (concurrently),
/// then reduces sequentially in plan order. Individual numerical failures are
/// recorded; more than 10% failures is a NumericalError. A flow that fails
/// check_steady_euler is a ValidationError.
SpectrumEstimate estimate_spectrum(const FourierFlow& flow, const SamplePlan& plan, const SpectrumControls& controls);

/// Aggregates already-computed samples (used by estimate_spectrum, exposed for
/// merging sample sets).
SpectrumEstimate aggregate_samples(std::vector<ExponentSample> samples, double gap_resolution);

/// Sorted union of intervals (touching or overlapping ones merge).
std::vector<Interval> merge_intervals(std::vector<Interval> intervals);

/// Inflates each [lo, hi] by `resolution` on both sides, merges, and reports
/// the largest uncovered gap inside [min lo, max hi]. Requires ≥ 2 intervals.
GapReport connectedness_diagnostic(std::span<const Interval> intervals, double resolution);
GapReport connectedness_diagnostic(const SpectrumEstimate& estimate, double resolution);

inline double default_gap_resolution(double T) { return 2.0 / std::sqrt(std::abs(T)); }

struct AnnulusReport {
  double t;
  double r_inner;
  double r_outer;
};

/// r_inner = exp(t·mu_hat), r_outer = exp(t·M_hat).
AnnulusReport annulus(const SpectrumEstimate& estimate, double t);

}  // namespace eulerspec
