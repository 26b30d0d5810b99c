#include <algorithm>
#include <cmath>
#include <sstream>

#include "eulerspec/errors.hpp"
#include "eulerspec/flow.hpp"

namespace eulerspec {

int default_steady_grid(const FourierFlow& flow) { return std::max(16, 2 * flow.max_wavenumber() + 1); }

SteadinessReport check_steady_euler(const FourierFlow& flow, int grid_per_axis, double tol) {
  const int required = 2 * flow.max_wavenumber() + 1;
  if (grid_per_axis < required) {
    throw ValidationError("steadiness grid of " + std::to_string(grid_per_axis) + " points per axis is below " +
                          std::to_string(required) + " required by the highest wavenumber");
  }

  SteadinessReport report;
  report.grid_per_axis = grid_per_axis;
  report.tol = tol;

  for (const FourierMode& m : flow.modes()) {
    const double k_dot_c = std::abs(m.k.cast<double>().cast<std::complex<double>>().dot(m.c));
    if (k_dot_c > tol) report.non_solenoidal_modes.push_back(m.k);
  }

  const double h = kTwoPi / grid_per_axis;
  for (int a = 0; a < grid_per_axis; ++a) {
    for (int b = 0; b < grid_per_axis; ++b) {
      for (int c = 0; c < grid_per_axis; ++c) {
        const Vec3 x(a * h, b * h, c * h);
        const FlowEval fe = flow.eval(x);
        const auto hess = flow.hessian(x);

        // w = (u·∇)u = (∂u) u, so ∂_m w_i = (∂u ∂u)_im + Σ_j u_j ∂_j∂_m u_i.
        Mat3 dw = fe.grad_u * fe.grad_u;
        for (int i = 0; i < 3; ++i) {
          dw.row(i) += (hess[static_cast<std::size_t>(i)].transpose() * fe.u).transpose();
        }
        const Vec3 curl(dw(2, 1) - dw(1, 2), dw(0, 2) - dw(2, 0), dw(1, 0) - dw(0, 1));
        const double curl_norm = curl.cwiseAbs().maxCoeff();
        const double div = std::abs(fe.grad_u.trace());

        report.curl_residual = std::max(report.curl_residual, curl_norm);
        report.divergence_residual = std::max(report.divergence_residual, div);
        const double worst = std::max(curl_norm, div);
        if (worst > report.worst_value) {
          report.worst_value = worst;
          report.worst_point = x;
        }
      }
    }
  }

  report.passed = report.non_solenoidal_modes.empty() && report.curl_residual <= tol &&
                  report.divergence_residual <= tol;
  return report;
}

std::string SteadinessReport::summary() const {
  std::ostringstream os;
  os.precision(6);
  os << (passed ? "PASS" : "FAIL") << ": curl residual " << curl_residual << ", divergence " << divergence_residual
     << " (tol " << tol << ", grid " << grid_per_axis << "^3)";
  for (const Wavenumber& k : non_solenoidal_modes) {
    os << "; mode (" << k[0] << "," << k[1] << "," << k[2] << ") is not divergence-free";
  }
  if (!passed && worst_value > tol) {
    os << "; worst residual " << worst_value << " at (" << worst_point[0] << "," << worst_point[1] << ","
       << worst_point[2] << ")";
  }
  return os.str();
}

}  // namespace eulerspec
