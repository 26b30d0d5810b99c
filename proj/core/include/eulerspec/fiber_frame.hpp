#pragma once

#include <cstdint>

#include "eulerspec/types.hpp"

namespace eulerspec {

/// Two real amplitude vectors spanning the fiber {b : b·ξ = 0}, plus the
/// accumulated log-stretch of each since the start of a run.
///
/// Between re-orthonormalizations b1 and b2 evolve freely and are neither unit
/// nor orthogonal. reference_norm1/2 are the Gram–Schmidt norms of the frame
/// as it stood right after the last re-orthonormalization; stretch factors are
/// measured against them, so a frame the dynamics never touched contributes
/// exactly log(1) = 0 to the ledgers.
struct FiberFrame {
  Vec3 b1 = Vec3::UnitX();
  Vec3 b2 = Vec3::UnitY();
  double ledger1 = 0.0;
  double ledger2 = 0.0;
  long reorth_count = 0;
  double reference_norm1 = 1.0;
  double reference_norm2 = 1.0;
};

/// Deterministic orthonormal basis of the plane ⊥ xi0 (|xi0| = 1), chosen from
/// a Mersenne-Twister stream seeded with `seed`. Ledgers start at zero.
FiberFrame init_fiber_frame(const Vec3& xi0, std::uint64_t seed);

}  // namespace eulerspec
