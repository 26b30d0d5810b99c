#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "eulerspec/types.hpp"

namespace eulerspec::testing {

// Small hand-rolled generators for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return lo + (hi - lo) * static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  Vec3 point() { return Vec3(uniform(0, kTwoPi), uniform(0, kTwoPi), uniform(0, kTwoPi)); }

  Vec3 unit() {
    for (;;) {
      const Vec3 v(uniform(-1, 1), uniform(-1, 1), uniform(-1, 1));
      const double n = v.norm();
      if (n > 0.1 && n <= 1.0) return v / n;
    }
  }

  // Unit vector orthogonal to n.
  Vec3 unit_perp(const Vec3& n) {
    for (;;) {
      Vec3 v = unit();
      v -= v.dot(n) * n;
      if (v.norm() > 0.1) return v.normalized();
    }
  }

  std::uint64_t bits() { return rng_(); }

 private:
  std::mt19937_64 rng_;
};

inline double max_abs(const Mat3& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace eulerspec::testing
