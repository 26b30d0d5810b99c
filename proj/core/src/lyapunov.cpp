#include "eulerspec/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "eulerspec/errors.hpp"

namespace eulerspec {
namespace {

struct GramSchmidt {
  Vec3 q1, q2;
  double n1, r12, n2;
};

GramSchmidt gram_schmidt(const Vec3& b1, const Vec3& b2, const Vec3& xi_dir) {
  const Vec3 p1 = b1 - b1.dot(xi_dir) * xi_dir;
  const Vec3 p2 = b2 - b2.dot(xi_dir) * xi_dir;
  GramSchmidt g;
  g.n1 = p1.norm();
  g.q1 = p1 / g.n1;
  g.r12 = g.q1.dot(p2);
  const Vec3 w = p2 - g.r12 * g.q1;
  g.n2 = w.norm();
  g.q2 = w / g.n2;
  return g;
}

// Uniform double in [-1, 1) from the raw 64-bit stream; the distribution
// classes of <random> are not reproducible across standard libraries.
double uniform_symmetric(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
}

void rebase_reference(FiberFrame& frame, const Vec3& xi_dir) {
  const GramSchmidt r = gram_schmidt(frame.b1, frame.b2, xi_dir);
  frame.reference_norm1 = r.n1;
  frame.reference_norm2 = r.n2;
}

void require_unit(const Vec3& xi0) {
  if (!(std::abs(xi0.norm() - 1.0) <= 1e-10)) throw ValidationError("initial wave vector must have unit length");
}

}  // namespace

FiberFrame init_fiber_frame(const Vec3& xi0, std::uint64_t seed) {
  require_unit(xi0);
  const Vec3 d = unit_direction(xi0);
  std::mt19937_64 rng(seed);
  Vec3 v;
  do {
    v = Vec3(uniform_symmetric(rng), uniform_symmetric(rng), uniform_symmetric(rng));
    v -= v.dot(d) * d;
  } while (v.norm() < 0.1);

  FiberFrame frame;
  frame.b1 = v.normalized();
  frame.b2 = d.cross(frame.b1).normalized();
  return frame;
}

double frame_condition(const FiberFrame& frame) {
  const double g11 = frame.b1.squaredNorm();
  const double g22 = frame.b2.squaredNorm();
  const double g12 = frame.b1.dot(frame.b2);
  const double half_trace = 0.5 * (g11 + g22);
  const double disc = std::sqrt(std::max(0.0, half_trace * half_trace - (g11 * g22 - g12 * g12)));
  const double lmax = half_trace + disc;
  const double lmin = half_trace - disc;
  if (!(lmin > 0.0)) return std::numeric_limits<double>::infinity();
  return std::sqrt(lmax / lmin);
}

void reorthonormalize(FiberFrame& frame, const Vec3& xi_dir) {
  const GramSchmidt g = gram_schmidt(frame.b1, frame.b2, xi_dir);
  const double s1 = g.n1 / frame.reference_norm1;
  const double s2 = g.n2 / frame.reference_norm2;
  if (!(s1 >= 1e-300) || !(s2 >= 1e-300) || !std::isfinite(s1) || !std::isfinite(s2)) {
    std::ostringstream os;
    os << "fiber frame collapsed (stretch factors " << s1 << ", " << s2 << ")";
    throw NumericalError(os.str());
  }
  frame.ledger1 += std::log(s1);
  frame.ledger2 += std::log(s2);
  frame.b1 = g.q1;
  frame.b2 = g.q2;
  ++frame.reorth_count;
  rebase_reference(frame, xi_dir);
}

ExponentSample evolve_exponents(const FourierFlow& flow, const Vec3& x0, const Vec3& xi0, double T,
                                const ExponentControls& controls, std::span<const double> checkpoints) {
  if (!(T != 0.0) || !std::isfinite(T)) throw ValidationError("exponent horizon must be finite and nonzero");
  if (!(controls.reorth_interval > 0.0)) throw ValidationError("re-orthonormalization interval must be positive");

  BasState initial;
  initial.x = x0;
  initial.xi_dir = unit_direction(xi0);
  initial.frame = init_fiber_frame(xi0, controls.frame_seed);
  rebase_reference(initial.frame, initial.xi_dir);

  const double dir = T > 0.0 ? 1.0 : -1.0;
  std::vector<double> marks;
  for (double c : checkpoints) {
    if (std::abs(c) > 0.0 && std::abs(c) < std::abs(T)) marks.push_back(dir * std::abs(c));
  }
  marks.push_back(T);
  std::sort(marks.begin(), marks.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());

  ExponentSample out;
  out.x0 = x0;
  out.xi0 = xi0;
  out.T = T;

  BasStepper stepper(flow, initial, controls.integrator);
  long reorth_index = 1;
  std::size_t mark_index = 0;
  while (stepper.state().t != T) {
    const double next_reorth = dir * static_cast<double>(reorth_index) * controls.reorth_interval;
    const double next_mark = marks[mark_index];
    const double target = std::abs(next_reorth) < std::abs(next_mark) ? next_reorth : next_mark;

    const double t = stepper.step_toward(target);
    const bool on_grid = t == next_reorth;
    const bool on_mark = t == next_mark;
    if (on_grid || on_mark || frame_condition(stepper.state().frame) > controls.max_condition) {
      FiberFrame frame = stepper.state().frame;
      reorthonormalize(frame, stepper.state().xi_dir);
      stepper.set_frame(frame);
    }
    if (on_grid) ++reorth_index;
    if (on_mark) {
      const FiberFrame& f = stepper.state().frame;
      const double l1 = f.ledger1 / std::abs(t);
      const double l2 = f.ledger2 / std::abs(t);
      out.convergence_tail.push_back({t, std::max(l1, l2), std::min(l1, l2)});
      ++mark_index;
    }
  }

  const FiberFrame& f = stepper.state().frame;
  out.lambda1 = std::max(f.ledger1, f.ledger2) / std::abs(T);
  out.lambda2 = std::min(f.ledger1, f.ledger2) / std::abs(T);
  out.drift = stepper.diagnostics();
  out.log_volume = f.ledger1 + f.ledger2;
  out.log_xi = stepper.state().log_xi;
  out.reorth_count = f.reorth_count;
  return out;
}

CocycleMatrix cocycle_matrix(const FourierFlow& flow, const Vec3& x0, const Vec3& xi0, double t,
                             const ExponentControls& controls) {
  if (!std::isfinite(t)) throw ValidationError("cocycle time must be finite");
  if (!(controls.reorth_interval > 0.0)) throw ValidationError("re-orthonormalization interval must be positive");

  BasState initial;
  initial.x = x0;
  initial.xi_dir = unit_direction(xi0);
  initial.frame = init_fiber_frame(xi0, 0);

  CocycleMatrix out;
  out.initial_e1 = initial.frame.b1;
  out.initial_e2 = initial.frame.b2;
  out.e1 = initial.frame.b1;
  out.e2 = initial.frame.b2;
  out.x = x0;
  out.xi_dir = initial.xi_dir;
  if (t == 0.0) return out;

  // R accumulates the upper-triangular Gram–Schmidt factors, kept at unit
  // scale with the magnitude carried separately in log_scale.
  Mat2 R = Mat2::Identity();
  double log_scale = 0.0;
  const auto absorb = [&](BasStepper& stepper) {
    const BasState& s = stepper.state();
    const GramSchmidt g = gram_schmidt(s.frame.b1, s.frame.b2, s.xi_dir);
    if (!(g.n1 > 1e-300) || !(g.n2 > 1e-300)) throw NumericalError("fiber frame collapsed in cocycle evaluation");
    Mat2 step;
    step << g.n1, g.r12, 0.0, g.n2;
    R = step * R;
    const double scale = R.cwiseAbs().maxCoeff();
    R /= scale;
    log_scale += std::log(scale);
    FiberFrame frame = s.frame;
    frame.b1 = g.q1;
    frame.b2 = g.q2;
    stepper.set_frame(frame);
  };

  BasStepper stepper(flow, initial, controls.integrator);
  const double dir = t > 0.0 ? 1.0 : -1.0;
  long k = 1;
  while (stepper.state().t != t) {
    const double next = dir * static_cast<double>(k) * controls.reorth_interval;
    const double target = std::abs(next) < std::abs(t) ? next : t;
    stepper.advance_to(target);
    absorb(stepper);
    ++k;
  }

  out.matrix = std::exp(log_scale) * R;
  out.e1 = stepper.state().frame.b1;
  out.e2 = stepper.state().frame.b2;
  out.x = stepper.state().x;
  out.xi_dir = stepper.state().xi_dir;
  return out;
}

}  // namespace eulerspec
