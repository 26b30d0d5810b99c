#pragma once

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

namespace eulerspec {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat2 = Eigen::Matrix2d;
using CVec3 = Eigen::Vector3cd;
using Wavenumber = Eigen::Vector3i;

/// Period of the torus in every coordinate.
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduces each coordinate to [0, 2π). Integration never needs this; it is
/// used for reporting only.
inline Vec3 reduce_to_torus(const Vec3& x) {
  Vec3 r;
  for (int i = 0; i < 3; ++i) {
    double v = std::fmod(x[i], kTwoPi);
    if (v < 0.0) v += kTwoPi;
    r[i] = (v >= kTwoPi) ? 0.0 : v;
  }
  return r;
}

}  // namespace eulerspec
