#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/LU>

#include "eulerspec/errors.hpp"
#include "eulerspec/spectrum.hpp"

namespace eulerspec {
namespace {

constexpr double kStagnationSpeed = 1e-12;

double unit_interval(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double radical_inverse(std::uint64_t index, std::uint64_t base) {
  double result = 0.0;
  double f = 1.0 / static_cast<double>(base);
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= static_cast<double>(base);
  }
  return result;
}

// (z, φ) uniform in [-1, 1] × [0, 2π) is uniform on the sphere.
Vec3 sphere_point(double u_z, double u_phi) {
  const double z = 1.0 - 2.0 * u_z;
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  const double phi = kTwoPi * u_phi;
  return Vec3(r * std::cos(phi), r * std::sin(phi), z).normalized();
}

// Orthonormal pair spanning the plane ⊥ n (|n| = 1).
std::pair<Vec3, Vec3> plane_basis(const Vec3& n) {
  int axis = 0;
  n.cwiseAbs().minCoeff(&axis);
  Vec3 e1 = Vec3::Unit(axis) - n[axis] * n;
  e1.normalize();
  return {e1, n.cross(e1).normalized()};
}

double torus_distance(const Vec3& a, const Vec3& b) {
  double d2 = 0.0;
  for (int i = 0; i < 3; ++i) {
    double d = std::abs(a[i] - b[i]);
    d = std::min(d, kTwoPi - d);
    d2 += d * d;
  }
  return std::sqrt(d2);
}

void require_count(const SamplePlan& plan) {
  if (plan.count < 1) throw ValidationError("sample count must be at least 1");
  if (plan.stagnation_directions < 0) throw ValidationError("stagnation direction count must be >= 0");
}

}  // namespace

std::string to_string(SampleStrategy s) {
  switch (s) {
    case SampleStrategy::lattice: return "lattice";
    case SampleStrategy::low_discrepancy: return "low-discrepancy";
    case SampleStrategy::random: return "random";
  }
  return "?";
}

std::string to_string(SampleConstraint c) { return c == SampleConstraint::none ? "none" : "omega_perp"; }

SampleStrategy parse_strategy(const std::string& name) {
  if (name == "lattice") return SampleStrategy::lattice;
  if (name == "low-discrepancy" || name == "low_discrepancy") return SampleStrategy::low_discrepancy;
  if (name == "random") return SampleStrategy::random;
  throw ValidationError("unknown sampling strategy '" + name + "'");
}

SampleConstraint parse_constraint(const std::string& name) {
  if (name == "none") return SampleConstraint::none;
  if (name == "omega_perp" || name == "omega-perp") return SampleConstraint::omega_perp;
  throw ValidationError("unknown sampling constraint '" + name + "'");
}

Vec3 fibonacci_direction(int i, int n) {
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  const double z = 1.0 - (2.0 * i + 1.0) / n;
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  const double phi = std::fmod(golden_angle * i, kTwoPi);
  return Vec3(r * std::cos(phi), r * std::sin(phi), z).normalized();
}

std::vector<InitialCondition> sample_omega(const SamplePlan& plan) {
  require_count(plan);
  if (plan.constraint != SampleConstraint::none) throw ValidationError("sample_omega expects an unconstrained plan");
  const auto n = static_cast<std::uint64_t>(plan.count);
  std::vector<InitialCondition> out;
  out.reserve(n);

  switch (plan.strategy) {
    case SampleStrategy::lattice: {
      std::uint64_t m = 1;
      while (m * m * m < n) ++m;
      const std::uint64_t cells = m * m * m;
      const double h = kTwoPi / static_cast<double>(m);
      for (std::uint64_t i = 0; i < n; ++i) {
        const std::uint64_t j = i * cells / n;
        const Vec3 x(h * static_cast<double>(j / (m * m)), h * static_cast<double>((j / m) % m),
                     h * static_cast<double>(j % m));
        out.push_back({x, fibonacci_direction(static_cast<int>(i), plan.count)});
      }
      break;
    }
    case SampleStrategy::low_discrepancy: {
      for (std::uint64_t i = 0; i < n; ++i) {
        const std::uint64_t idx = i + 1 + plan.seed;
        const Vec3 x(kTwoPi * radical_inverse(idx, 2), kTwoPi * radical_inverse(idx, 3),
                     kTwoPi * radical_inverse(idx, 5));
        out.push_back({x, sphere_point(radical_inverse(idx, 7), radical_inverse(idx, 11))});
      }
      break;
    }
    case SampleStrategy::random: {
      std::mt19937_64 rng(plan.seed);
      for (std::uint64_t i = 0; i < n; ++i) {
        Vec3 x;
        for (int c = 0; c < 3; ++c) x[c] = kTwoPi * unit_interval(rng);
        const double uz = unit_interval(rng);
        const double uphi = unit_interval(rng);
        out.push_back({x, sphere_point(uz, uphi)});
      }
      break;
    }
  }
  return out;
}

std::vector<Vec3> find_stagnation_points(const FourierFlow& flow, int seeds_per_axis) {
  if (seeds_per_axis < 1) throw ValidationError("stagnation search needs at least one seed per axis");
  std::vector<Vec3> found;
  const double h = kTwoPi / seeds_per_axis;
  for (int a = 0; a < seeds_per_axis; ++a) {
    for (int b = 0; b < seeds_per_axis; ++b) {
      for (int c = 0; c < seeds_per_axis; ++c) {
        Vec3 x((a + 0.5) * h, (b + 0.5) * h, (c + 0.5) * h);
        FlowEval fe = flow.eval(x);
        double speed = fe.u.norm();
        for (int iter = 0; iter < 60 && speed > kStagnationSpeed; ++iter) {
          const Eigen::FullPivLU<Mat3> lu(fe.grad_u);
          if (!lu.isInvertible()) break;
          const Vec3 step = lu.solve(fe.u);
          double alpha = 1.0;
          bool improved = false;
          for (int halving = 0; halving < 30; ++halving, alpha *= 0.5) {
            const Vec3 trial = x - alpha * step;
            const FlowEval te = flow.eval(trial);
            if (te.u.norm() < speed) {
              x = trial;
              fe = te;
              speed = te.u.norm();
              improved = true;
              break;
            }
          }
          if (!improved) break;
        }
        if (!(speed <= kStagnationSpeed)) continue;
        const Vec3 r = reduce_to_torus(x);
        const bool duplicate =
            std::any_of(found.begin(), found.end(), [&](const Vec3& p) { return torus_distance(p, r) < 1e-6; });
        if (!duplicate) found.push_back(r);
      }
    }
  }
  std::sort(found.begin(), found.end(), [](const Vec3& p, const Vec3& q) {
    return std::lexicographical_compare(p.data(), p.data() + 3, q.data(), q.data() + 3);
  });
  return found;
}

std::vector<InitialCondition> sample_omega_perp(const FourierFlow& flow, const SamplePlan& plan) {
  require_count(plan);
  if (plan.constraint != SampleConstraint::omega_perp) {
    throw ValidationError("sample_omega_perp expects an omega_perp plan");
  }
  SamplePlan base_plan = plan;
  base_plan.constraint = SampleConstraint::none;
  std::vector<InitialCondition> out = sample_omega(base_plan);

  for (InitialCondition& ic : out) {
    const Vec3 u = flow.velocity(ic.x0);
    const double speed = u.norm();
    if (speed <= kStagnationSpeed) continue;  // whole sphere admissible
    const Vec3 n = u / speed;
    const auto [e1, e2] = plane_basis(n);
    // Reuse the azimuth of the unconstrained draw as the angle on the circle.
    const double theta = std::atan2(ic.xi0[1], ic.xi0[0]);
    Vec3 xi = std::cos(theta) * e1 + std::sin(theta) * e2;
    xi -= xi.dot(n) * n;
    ic.xi0 = xi.normalized();
  }

  if (plan.stagnation_directions > 0) {
    for (const Vec3& p : find_stagnation_points(flow)) {
      for (int i = 0; i < plan.stagnation_directions; ++i) {
        out.push_back({p, fibonacci_direction(i, plan.stagnation_directions)});
      }
    }
  }
  return out;
}

std::vector<InitialCondition> sample_plan(const FourierFlow& flow, const SamplePlan& plan) {
  return plan.constraint == SampleConstraint::none ? sample_omega(plan) : sample_omega_perp(flow, plan);
}

}  // namespace eulerspec
