#include "eulerspec/bas.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace eulerspec {
namespace {

constexpr double kRoundoff = 4.0 * std::numeric_limits<double>::epsilon();

void require_initial_data(const Vec3& xi0, const FiberFrame& frame0) {
  if (!(std::abs(xi0.norm() - 1.0) <= 1e-10)) {
    throw ValidationError("initial wave vector must have unit length");
  }
  const Vec3 dir = unit_direction(xi0);
  for (const Vec3* b : {&frame0.b1, &frame0.b2}) {
    const double n = b->norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw ValidationError("initial amplitude vector must be nonzero and finite");
    if (std::abs(b->dot(dir)) > kFiberTolerance * n) {
      std::ostringstream os;
      os << "initial amplitude is not orthogonal to the wave vector: |b·xi|/|b| = " << std::abs(b->dot(dir)) / n;
      throw ValidationError(os.str());
    }
  }
}

}  // namespace

Vec3 unit_direction(const Vec3& v) {
  const double n = v.norm();
  return std::abs(n - 1.0) <= kRoundoff ? v : Vec3(v / n);
}

BasDerivative bas_rhs(const FourierFlow& flow, const BasState& state) {
  const FlowEval fe = flow.eval(state.x);
  const Vec3& d = state.xi_dir;
  const Vec3 raw = -fe.grad_u.transpose() * d;
  const double radial = raw.dot(d);
  return BasDerivative{fe.u, raw - radial * d, radial, amplitude_rate(fe.grad_u, d, state.frame.b1),
                       amplitude_rate(fe.grad_u, d, state.frame.b2)};
}

double hamiltonian(const FourierFlow& flow, const Vec3& x, const Vec3& xi) { return flow.velocity(x).dot(xi); }

void BasStepper::Rhs::operator()(const Packed& y, Packed& dydt) const {
  const FlowEval fe = flow->eval(y.segment<3>(0));
  const Vec3 d = y.segment<3>(3);
  const Vec3 raw = -fe.grad_u.transpose() * d;
  const double radial = raw.dot(d);
  dydt.segment<3>(0) = fe.u;
  dydt.segment<3>(3) = raw - radial * d;
  dydt[6] = radial;
  dydt.segment<3>(7) = amplitude_rate(fe.grad_u, d, y.segment<3>(7));
  dydt.segment<3>(10) = amplitude_rate(fe.grad_u, d, y.segment<3>(10));
}

BasStepper::BasStepper(const FourierFlow& flow, const BasState& initial, const IntegratorControls& controls)
    : flow_(&flow), solver_(Rhs{&flow}, Packed::Zero(), initial.t, controls), state_(initial) {
  for (int i = 0; i < 3; ++i) solver_.set_magnitude_cap(i, kTwoPi);
  solver_.set_state(pack());
  H0_ = hamiltonian(flow, state_.x, state_.xi());
}

BasStepper::Packed BasStepper::pack() const {
  Packed y;
  y.segment<3>(0) = state_.x;
  y.segment<3>(3) = state_.xi_dir;
  y[6] = state_.log_xi;
  y.segment<3>(7) = state_.frame.b1;
  y.segment<3>(10) = state_.frame.b2;
  return y;
}

void BasStepper::unpack(const Packed& y) {
  state_.t = solver_.time();
  state_.x = y.segment<3>(0);
  state_.xi_dir = y.segment<3>(3);
  state_.log_xi = y[6];
  state_.frame.b1 = y.segment<3>(7);
  state_.frame.b2 = y.segment<3>(10);
}

double BasStepper::step_toward(double t_end) {
  solver_.step_toward(t_end);
  unpack(solver_.state());

  bool modified = false;
  const double n = state_.xi_dir.norm();
  const double norm_error = std::abs(n - 1.0);
  if (norm_error > kRoundoff) {
    state_.xi_dir /= n;
    diagnostics_.max_xi_norm_correction = std::max(diagnostics_.max_xi_norm_correction, norm_error);
    modified = true;
  }
  for (Vec3* b : {&state_.frame.b1, &state_.frame.b2}) {
    const double bn = b->norm();
    const double along = b->dot(state_.xi_dir);
    if (bn > 0.0) {
      const double rel = std::abs(along) / bn;
      diagnostics_.max_bxi_drift = std::max(diagnostics_.max_bxi_drift, rel);
      recent_bxi_drift_ = std::max(recent_bxi_drift_, rel);
      if (rel > kRoundoff) {
        *b -= along * state_.xi_dir;
        modified = true;
      }
    }
  }
  if (modified) solver_.set_state(pack());

  const double H = hamiltonian(*flow_, state_.x, state_.xi());
  diagnostics_.max_H_drift = std::max(diagnostics_.max_H_drift, std::abs(H - H0_));
  diagnostics_.steps = solver_.statistics();
  return state_.t;
}

void BasStepper::advance_to(double t_end) {
  while (state_.t != t_end) step_toward(t_end);
}

void BasStepper::set_frame(const FiberFrame& frame) {
  state_.frame = frame;
  solver_.set_state(pack());
}

double BasStepper::take_recent_bxi_drift() { return std::exchange(recent_bxi_drift_, 0.0); }

TrajectoryRecord integrate_bas(const FourierFlow& flow, const Vec3& x0, const Vec3& xi0, const FiberFrame& frame0,
                               double T, const IntegratorControls& controls, double cadence) {
  require_initial_data(xi0, frame0);
  if (!std::isfinite(T)) throw ValidationError("integration horizon must be finite");
  if (cadence < 0.0 || !std::isfinite(cadence)) throw ValidationError("sample cadence must be finite and >= 0");

  BasState initial;
  initial.x = x0;
  initial.xi_dir = unit_direction(xi0);
  initial.frame = frame0;
  BasStepper stepper(flow, initial, controls);

  TrajectoryRecord record;
  const auto sample = [&](double drift) {
    const BasState& s = stepper.state();
    record.samples.push_back(TrajectorySample{s.t, s.x, s.xi_dir, s.log_xi, hamiltonian(flow, s.x, s.xi()), drift,
                                              s.frame.b1, s.frame.b2});
  };
  sample(0.0);

  const double dir = T >= 0.0 ? 1.0 : -1.0;
  long next = 1;
  while (stepper.state().t != T) {
    double target = T;
    if (cadence > 0.0) {
      const double tc = dir * static_cast<double>(next) * cadence;
      if (dir * tc < dir * T) target = tc;
    }
    stepper.advance_to(target);
    sample(stepper.take_recent_bxi_drift());
    ++next;
  }

  record.diagnostics = stepper.diagnostics();
  record.final_state = stepper.state();
  return record;
}

Mat3 jacobian_flow(const FourierFlow& flow, const Vec3& x0, double T, const IntegratorControls& controls) {
  using Packed = Eigen::Matrix<double, 12, 1>;
  const auto rhs = [&flow](const Packed& y, Packed& dydt) {
    const FlowEval fe = flow.eval(y.segment<3>(0));
    dydt.segment<3>(0) = fe.u;
    const Eigen::Map<const Mat3> w(y.data() + 3);
    Eigen::Map<Mat3>(dydt.data() + 3) = fe.grad_u * w;
  };
  Packed y0;
  y0.segment<3>(0) = x0;
  Eigen::Map<Mat3>(y0.data() + 3) = Mat3::Identity();
  DormandPrince54<12, decltype(rhs)> solver(rhs, y0, 0.0, controls);
  for (int i = 0; i < 3; ++i) solver.set_magnitude_cap(i, kTwoPi);
  solver.advance_to(T);
  return Eigen::Map<const Mat3>(solver.state().data() + 3);
}

}  // namespace eulerspec
