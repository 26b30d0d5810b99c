#pragma once

#include <vector>

#include "eulerspec/fiber_frame.hpp"
#include "eulerspec/flow.hpp"
#include "eulerspec/integrator.hpp"

namespace eulerspec {

/// One point of the coupled (x, ξ, b) system. ξ = exp(log_xi) · xi_dir.
struct BasState {
  double t = 0.0;
  Vec3 x = Vec3::Zero();
  Vec3 xi_dir = Vec3::UnitZ();
  double log_xi = 0.0;
  FiberFrame frame;

  Vec3 xi() const { return std::exp(log_xi) * xi_dir; }
};

struct BasDerivative {
  Vec3 dx;
  Vec3 dxi_dir;
  double dlog_xi;
  Vec3 db1;
  Vec3 db2;
};

/// Time derivative of the bicharacteristic-amplitude system at `state`:
///   ẋ = u(x)
///   ξ̇ = −(∂u)ᵀ ξ, split into a tangential part for xi_dir and a radial part
///       d log|ξ|/dt = −xi_dirᵀ (∂u) xi_dir
///   ḃ = −(∂u) b + 2 ((∂u) b · xi_dir) xi_dir   (|ξ|⁻² cancels on a unit ξ)
BasDerivative bas_rhs(const FourierFlow& flow, const BasState& state);

/// The amplitude generator alone, for a given gradient and unit direction.
inline Vec3 amplitude_rate(const Mat3& grad_u, const Vec3& xi_dir, const Vec3& b) {
  const Vec3 gb = grad_u * b;
  return -gb + 2.0 * gb.dot(xi_dir) * xi_dir;
}

double hamiltonian(const FourierFlow& flow, const Vec3& x, const Vec3& xi);

// v / |v|, except that a vector already unit to round-off is returned bitwise.
Vec3 unit_direction(const Vec3& v);

struct TrajectorySample {
  double t;
  Vec3 x;
  Vec3 xi_dir;
  double log_xi;
  double H;
  /// Largest relative |b·xi_dir|/|b| removed by re-projection since the
  /// previous sample.
  double drift_bxi;
  Vec3 b1;
  Vec3 b2;
};

struct TrajectoryDiagnostics {
  double max_H_drift = 0.0;
  double max_bxi_drift = 0.0;
  /// Largest ||xi_dir| − 1| removed by renormalization.
  double max_xi_norm_correction = 0.0;
  StepStatistics steps;
};

struct TrajectoryRecord {
  std::vector<TrajectorySample> samples;
  TrajectoryDiagnostics diagnostics;
  BasState final_state;
};

/// Largest admissible |b·ξ₀| for caller-supplied initial amplitudes.
inline constexpr double kFiberTolerance = 1e-8;

/// Steps the BAS one accepted step at a time, renormalizing xi_dir and
/// re-projecting the frame onto xi_dir^⊥ after every step. Corrections below
/// round-off (a few ulps) are skipped so that states the dynamics leave
/// untouched stay bitwise unchanged. Used by integrate_bas and by the
/// exponent machinery, which needs to interleave Gram–Schmidt.
class BasStepper {
 public:
  BasStepper(const FourierFlow& flow, const BasState& initial, const IntegratorControls& controls);

  double step_toward(double t_end);
  void advance_to(double t_end);

  const BasState& state() const noexcept { return state_; }
  /// Replace the frame vectors (after Gram–Schmidt). Must stay ⊥ xi_dir.
  void set_frame(const FiberFrame& frame);

  const TrajectoryDiagnostics& diagnostics() const noexcept { return diagnostics_; }
  /// Largest relative b·ξ drift seen since the last call.
  double take_recent_bxi_drift();

 private:
  using Packed = Eigen::Matrix<double, 13, 1>;
  struct Rhs {
    const FourierFlow* flow;
    void operator()(const Packed& y, Packed& dydt) const;
  };

  void unpack(const Packed& y);
  Packed pack() const;

  const FourierFlow* flow_;
  DormandPrince54<13, Rhs> solver_;
  BasState state_;
  double H0_;
  TrajectoryDiagnostics diagnostics_;
  double recent_bxi_drift_ = 0.0;
};

/// Integrates from t = 0 to T (either sign). xi0 must be a unit vector and
/// both frame vectors must satisfy |b·xi0| ≤ kFiberTolerance·|b|, otherwise
/// ValidationError. Samples are recorded at t = 0, every `cadence` time units
/// (0 means endpoints only) and at T.
TrajectoryRecord integrate_bas(const FourierFlow& flow, const Vec3& x0, const Vec3& xi0, const FiberFrame& frame0,
                               double T, const IntegratorControls& controls, double cadence = 0.0);

/// ∂φ_T(x0): fundamental matrix of ẇ = ∂u(x(t)) w along the trajectory.
Mat3 jacobian_flow(const FourierFlow& flow, const Vec3& x0, double T, const IntegratorControls& controls);

}  // namespace eulerspec
