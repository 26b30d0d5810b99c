#include "eulerspec/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <Eigen/LU>

#include "eulerspec/errors.hpp"

namespace eulerspec {

double DriftReport::worst() const {
  return std::max({max_H_drift, max_bxi_drift, det_jacobian_err, xi_consistency_angle, xi_magnitude_err,
                   group_roundtrip_err});
}

DriftReport audit_trajectory(const FourierFlow& flow, const Vec3& x0, const Vec3& xi0, const FiberFrame& frame0,
                             double T, const IntegratorControls& controls) {
  const TrajectoryRecord forward = integrate_bas(flow, x0, xi0, frame0, T, controls);
  const Mat3 W = jacobian_flow(flow, x0, T, controls);

  DriftReport r;
  r.max_H_drift = forward.diagnostics.max_H_drift;
  r.max_bxi_drift = forward.diagnostics.max_bxi_drift;
  r.det_jacobian_err = std::abs(W.determinant() - 1.0);

  const Vec3 expected = W.transpose().fullPivLu().solve(xi0);
  const Vec3& dir = forward.final_state.xi_dir;
  r.xi_consistency_angle = std::atan2(dir.cross(expected).norm(), dir.dot(expected));
  const double expected_norm = expected.norm();
  r.xi_magnitude_err = std::abs(std::exp(forward.final_state.log_xi) - expected_norm) / expected_norm;

  const BasState& end = forward.final_state;
  const TrajectoryRecord back = integrate_bas(flow, end.x, end.xi_dir, end.frame, -T, controls);
  const BasState& home = back.final_state;
  const double scale1 = frame0.b1.cwiseAbs().maxCoeff();
  const double scale2 = frame0.b2.cwiseAbs().maxCoeff();
  r.group_roundtrip_err = std::max({(home.x - x0).cwiseAbs().maxCoeff(),
                                    (home.xi_dir - xi0).cwiseAbs().maxCoeff(),
                                    std::abs(home.log_xi + end.log_xi),
                                    (home.frame.b1 - frame0.b1).cwiseAbs().maxCoeff() / scale1,
                                    (home.frame.b2 - frame0.b2).cwiseAbs().maxCoeff() / scale2});
  return r;
}

BasState shear_oracle(const Vec3& U, const Vec3& x0, const Vec3& xi0, const FiberFrame& frame0, double T) {
  BasState s;
  s.t = T;
  s.x = x0 + U * T;
  s.xi_dir = unit_direction(xi0);
  s.log_xi = std::log(xi0.norm());
  s.frame = frame0;
  return s;
}

Vec3 kolmogorov_amplitude(double amplitude, double x2, const Vec3& xi0, const Vec3& b0, double T) {
  const double s = amplitude * std::cos(x2);
  const double p = xi0[0], q = xi0[1], r = xi0[2];
  const double N0 = xi0.squaredNorm();
  const double alpha = s * p;
  const auto N = [&](double t) { return (q - alpha * t) * (q - alpha * t) + p * p + r * r; };

  double I1 = 0.0, I2 = 0.0;
  if (alpha == 0.0) {
    I1 = T / N0;
    I2 = T / (N0 * N0);
  } else {
    // N(τ) = c²(1 + w²) with w = α(τ − t0)/c, t0 = q/α.
    const double c = std::sqrt(p * p + r * r);
    const double t0 = q / alpha;
    const double w0 = alpha * (0.0 - t0) / c;
    const double w1 = alpha * (T - t0) / c;
    const auto F = [](double w) { return 0.5 * w / (1.0 + w * w) + 0.5 * std::atan(w); };
    I1 = (std::atan(w1) - std::atan(w0)) / (alpha * c);
    I2 = (F(w1) - F(w0)) / (alpha * c * c * c);
  }

  const double b2_0 = b0[1];
  Vec3 b;
  b[1] = b2_0 * N0 / N(T);
  b[2] = b0[2] + 2.0 * s * p * r * b2_0 * N0 * I2;
  b[0] = b0[0] - s * b2_0 * N0 * I1 + 2.0 * s * p * p * b2_0 * N0 * I2;
  return b;
}

BasState kolmogorov_oracle(double amplitude, const Vec3& x0, const Vec3& xi0, const FiberFrame& frame0, double T) {
  const double s = amplitude * std::cos(x0[1]);
  const Vec3 xi(xi0[0], xi0[1] - s * T * xi0[0], xi0[2]);
  BasState out;
  out.t = T;
  out.x = x0 + Vec3(amplitude * std::sin(x0[1]) * T, 0.0, 0.0);
  out.xi_dir = xi.normalized();
  out.log_xi = std::log(xi.norm());
  out.frame = frame0;
  out.frame.b1 = kolmogorov_amplitude(amplitude, x0[1], xi0, frame0.b1, T);
  out.frame.b2 = kolmogorov_amplitude(amplitude, x0[1], xi0, frame0.b2, T);
  return out;
}

HalvingStudy step_halving_study(const FourierFlow& flow, const Vec3& x0, const Vec3& xi0, double T,
                                const std::vector<double>& tolerances, const ExponentControls& base) {
  if (tolerances.size() < 2) throw ValidationError("step-halving study needs at least two tolerance levels");
  std::vector<double> tols = tolerances;
  std::sort(tols.begin(), tols.end(), std::greater<>());
  const double atol_ratio = base.integrator.atol / base.integrator.rtol;

  HalvingStudy study;
  for (double tol : tols) {
    if (!(tol > 0.0)) throw ValidationError("tolerances must be positive");
    ExponentControls c = base;
    c.integrator.rtol = tol;
    c.integrator.atol = tol * atol_ratio;
    const ExponentSample s = evolve_exponents(flow, x0, xi0, T, c);
    HalvingRow row{tol, s.lambda1, s.lambda2, 0.0};
    if (!study.rows.empty()) {
      const HalvingRow& prev = study.rows.back();
      row.difference = std::max(std::abs(row.lambda1 - prev.lambda1), std::abs(row.lambda2 - prev.lambda2));
    }
    study.rows.push_back(row);
  }
  for (std::size_t i = 1; i < study.rows.size(); ++i) {
    if (!std::isfinite(study.rows[i].difference)) study.passed = false;
    if (i >= 2 && study.rows[i].difference > study.rows[i - 1].difference) study.passed = false;
  }
  return study;
}

}  // namespace eulerspec
