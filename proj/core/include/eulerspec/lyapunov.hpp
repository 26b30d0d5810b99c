#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "eulerspec/bas.hpp"
#include "eulerspec/fiber_frame.hpp"

namespace eulerspec {

struct ExponentCheckpoint {
  double t;
  double lambda1;
  double lambda2;
};

/// Finite-time exponents of the amplitude cocycle for one initial condition.
struct ExponentSample {
  Vec3 x0 = Vec3::Zero();
  Vec3 xi0 = Vec3::UnitZ();
  double T = 0.0;
  double lambda1 = 0.0;  ///< ≥ lambda2
  double lambda2 = 0.0;
  TrajectoryDiagnostics drift;
  std::vector<ExponentCheckpoint> convergence_tail;
  /// ledger1 + ledger2 at T: log of the area stretch of the fiber.
  double log_volume = 0.0;
  /// log|ξ(T)| of the wave vector that carried the fiber.
  double log_xi = 0.0;
  long reorth_count = 0;
};

struct ExponentControls {
  IntegratorControls integrator;
  double reorth_interval = 0.5;
  /// Early re-orthonormalization once the frame's condition number exceeds this.
  double max_condition = 1e6;
  std::uint64_t frame_seed = 0;
};

/// Gram–Schmidt of (b1, b2) inside the plane ⊥ xi_dir, adding log stretch
/// factors (relative to the frame's reference norms) to the ledgers. Throws
/// NumericalError if a stretch factor drops below 1e-300.
void reorthonormalize(FiberFrame& frame, const Vec3& xi_dir);

/// Condition number σ_max/σ_min of the 3×2 matrix [b1 b2].
double frame_condition(const FiberFrame& frame);

/// Integrates the frame jointly with (x, ξ) to T, re-orthonormalizing every
/// reorth_interval and at each checkpoint. λ_i = ledger_i/|T|, sorted.
/// Negative T gives backward-time growth rates. Checkpoints beyond T are
/// ignored; T itself is always recorded.
ExponentSample evolve_exponents(const FourierFlow& flow, const Vec3& x0, const Vec3& xi0, double T,
                                const ExponentControls& controls, std::span<const double> checkpoints = {});

/// Matrix of B_t restricted to the fiber over (x0, xi0).
struct CocycleMatrix {
  /// Columns: coordinates, in the evolved basis (e1, e2), of the images of the
  /// initial basis vectors.
  Mat2 matrix = Mat2::Identity();
  Vec3 initial_e1, initial_e2;  ///< init_fiber_frame(xi0, 0)
  Vec3 e1, e2;                  ///< orthonormal basis of the fiber at time t
  Vec3 x;                       ///< φ_t(x0), unreduced
  Vec3 xi_dir;                  ///< ξ(t)/|ξ(t)|
};

CocycleMatrix cocycle_matrix(const FourierFlow& flow, const Vec3& x0, const Vec3& xi0, double t,
                             const ExponentControls& controls);

}  // namespace eulerspec
