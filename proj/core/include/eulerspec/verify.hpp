#pragma once

#include <vector>

#include "eulerspec/bas.hpp"
#include "eulerspec/lyapunov.hpp"

namespace eulerspec {

/// Worst violations of the exactly known properties along one trajectory.
struct DriftReport {
  /// max_t |H(x, ξ) − H₀|
  double max_H_drift = 0.0;
  /// max relative |b·ξ| removed by re-projection
  double max_bxi_drift = 0.0;
  /// |det ∂φ_T − 1|
  double det_jacobian_err = 0.0;
  /// angle between ξ(T) and ∂φ_T^{−ᵀ} ξ₀ (radians)
  double xi_consistency_angle = 0.0;
  /// relative mismatch of |ξ(T)| against |∂φ_T^{−ᵀ} ξ₀|
  double xi_magnitude_err = 0.0;
  /// max-norm distance after integrating to T and back to 0
  double group_roundtrip_err = 0.0;

  double worst() const;
};

/// Integrates the BAS and the variational equation and fills every field.
DriftReport audit_trajectory(const FourierFlow& flow, const Vec3& x0, const Vec3& xi0, const FiberFrame& frame0,
                             double T, const IntegratorControls& controls);

/// Exact state for a constant field U: x(T) = x0 + U·T, everything else fixed.
BasState shear_oracle(const Vec3& U, const Vec3& x0, const Vec3& xi0, const FiberFrame& frame0, double T);

/// Exact state for u = (a sin x₂, 0, 0). With s = a·cos x₂(0) constant along
/// the trajectory and ξ₀ = (p, q, r):
///   ξ(t) = (p, q − s p t, r),  N(t) = |ξ(t)|²
///   b₂(t) = b₂(0) N(0)/N(t)
///   b₃(t) = b₃(0) + 2 s p r b₂(0) N(0) I₂(t)
///   b₁(t) = b₁(0) − s b₂(0) N(0) I₁(t) + 2 s p² b₂(0) N(0) I₂(t)
/// where I₁ = ∫₀ᵗ dτ/N and I₂ = ∫₀ᵗ dτ/N² are elementary (arctan) integrals.
/// xi0 need not be unit; the returned log_xi is log|ξ(T)|. Frame ledgers are
/// copied unchanged.
BasState kolmogorov_oracle(double amplitude, const Vec3& x0, const Vec3& xi0, const FiberFrame& frame0, double T);

/// Amplitude part of kolmogorov_oracle for a single vector.
Vec3 kolmogorov_amplitude(double amplitude, double x2, const Vec3& xi0, const Vec3& b0, double T);

struct HalvingRow {
  double rtol;
  double lambda1;
  double lambda2;
  /// max(|Δλ₁|, |Δλ₂|) against the previous row; 0 for the first row.
  double difference;
};

struct HalvingStudy {
  std::vector<HalvingRow> rows;
  /// Differences do not grow as the tolerance tightens.
  bool passed = true;
};

/// Re-runs evolve_exponents at each relative tolerance (atol scaled by the
/// same factor as the default pair) and tabulates the exponent differences.
HalvingStudy step_halving_study(const FourierFlow& flow, const Vec3& x0, const Vec3& xi0, double T,
                                const std::vector<double>& tolerances, const ExponentControls& base);

}  // namespace eulerspec
