#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "eulerspec/types.hpp"

namespace eulerspec {

/// One term c·exp(i k·x) of a trigonometric velocity field.
struct FourierMode {
  Wavenumber k;
  CVec3 c;
};

/// Velocity and its gradient at a point; grad_u(i, j) = ∂u_i/∂x_j.
struct FlowEval {
  Vec3 u;
  Mat3 grad_u;
};

/// A real steady velocity field on the 2π-periodic 3-torus, stored as a
/// finite list of Fourier modes.
///
/// Construction enforces Hermitian symmetry (every k has its −k partner with
/// the conjugate coefficient), which is what makes the field real. Whether the
/// field is divergence-free and steady is a separate question answered by
/// check_steady_euler, so that invalid user input can still be loaded and
/// diagnosed. Instances are immutable and safe to share across threads.
class FourierFlow {
 public:
  /// Throws ValidationError on a missing or conflicting conjugate partner, a
  /// duplicated wavenumber, or a k = 0 mode with a nonzero imaginary part.
  FourierFlow(std::string name, std::vector<FourierMode> modes);

  const std::string& name() const noexcept { return name_; }
  std::span<const FourierMode> modes() const noexcept { return modes_; }

  /// Largest |k_i| over all modes and components.
  int max_wavenumber() const noexcept { return max_wavenumber_; }

  /// Closed-form u and ∂u at x. x may be any real point; no reduction needed.
  FlowEval eval(const Vec3& x) const;
  Vec3 velocity(const Vec3& x) const;

  /// Second derivatives: result[i](j, m) = ∂_j ∂_m u_i.
  std::array<Mat3, 3> hessian(const Vec3& x) const;

 private:
  std::string name_;
  // Pairs are stored adjacently (k, −k) so one sincos serves both; k = 0
  // modes follow the pairs.
  std::vector<FourierMode> modes_;
  std::size_t paired_count_ = 0;
  int max_wavenumber_ = 0;
  double coefficient_scale_ = 0.0;
};

/// u = (A sin x₃ + C cos x₂, B sin x₁ + A cos x₃, C sin x₂ + B cos x₁).
FourierFlow make_abc_flow(double A, double B, double C);

/// Constant field u = U (a single k = 0 mode).
FourierFlow make_shear_flow(const Vec3& U);

/// u = (amplitude · sin x₂, 0, 0).
FourierFlow make_kolmogorov_flow(double amplitude);

/// Result of check_steady_euler.
struct SteadinessReport {
  bool passed = false;
  int grid_per_axis = 0;
  double tol = 0.0;
  /// max over the grid of |curl((u·∇)u)|∞
  double curl_residual = 0.0;
  /// max over the grid of |∇·u|
  double divergence_residual = 0.0;
  /// Grid point and value of the worst residual (either kind).
  Vec3 worst_point = Vec3::Zero();
  double worst_value = 0.0;
  /// Modes with |k·c| > tol, which can never be divergence-free.
  std::vector<Wavenumber> non_solenoidal_modes;

  std::string summary() const;
};

/// Samples the curl of the advection term and the divergence on a uniform
/// grid_per_axis³ grid. The pressure never appears: (u·∇)u is a gradient on
/// the torus exactly when its curl vanishes.
///
/// Throws ValidationError if grid_per_axis < 2·max_wavenumber + 1.
SteadinessReport check_steady_euler(const FourierFlow& flow, int grid_per_axis, double tol);

/// Grid size used when callers do not pick one.
int default_steady_grid(const FourierFlow& flow);

inline constexpr double kDefaultSteadyTol = 1e-10;

}  // namespace eulerspec
