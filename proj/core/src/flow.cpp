#include "eulerspec/flow.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <sstream>
#include <tuple>

#include "eulerspec/errors.hpp"

namespace eulerspec {
namespace {

using Complex = std::complex<double>;
using Key = std::tuple<int, int, int>;

Key key_of(const Wavenumber& k) { return {k[0], k[1], k[2]}; }

std::string describe(const Wavenumber& k) {
  std::ostringstream os;
  os << "(" << k[0] << "," << k[1] << "," << k[2] << ")";
  return os.str();
}

// Lexicographically positive wavenumbers represent their pair.
bool is_representative(const Wavenumber& k) {
  for (int i = 0; i < 3; ++i) {
    if (k[i] != 0) return k[i] > 0;
  }
  return false;
}

}  // namespace

FourierFlow::FourierFlow(std::string name, std::vector<FourierMode> modes) : name_(std::move(name)) {
  std::map<Key, std::size_t> index;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (!index.emplace(key_of(modes[i].k), i).second) {
      throw ValidationError("flow '" + name_ + "': duplicated wavenumber " + describe(modes[i].k));
    }
  }

  std::vector<FourierMode> zero_modes;
  for (const FourierMode& m : modes) {
    if (m.k.isZero()) {
      if (m.c.imag().cwiseAbs().maxCoeff() != 0.0) {
        throw ValidationError("flow '" + name_ + "': k = (0,0,0) mode must have a real coefficient");
      }
      zero_modes.push_back(m);
      continue;
    }
    if (!is_representative(m.k)) continue;
    const Wavenumber minus_k = -m.k;
    const auto it = index.find(key_of(minus_k));
    if (it == index.end()) {
      throw ValidationError("flow '" + name_ + "': mode " + describe(m.k) + " has no conjugate partner " +
                            describe(minus_k));
    }
    const CVec3& partner = modes[it->second].c;
    const double mismatch = (partner - m.c.conjugate()).cwiseAbs().maxCoeff();
    const double scale = m.c.cwiseAbs().maxCoeff() + partner.cwiseAbs().maxCoeff();
    if (mismatch > 1e-12 * scale) {
      throw ValidationError("flow '" + name_ + "': mode " + describe(minus_k) +
                            " conflicts with the conjugate of mode " + describe(m.k));
    }
    modes_.push_back(m);
    modes_.push_back(FourierMode{minus_k, m.c.conjugate()});
  }
  paired_count_ = modes_.size();
  modes_.insert(modes_.end(), zero_modes.begin(), zero_modes.end());

  for (const FourierMode& m : modes_) {
    max_wavenumber_ = std::max(max_wavenumber_, m.k.cwiseAbs().maxCoeff());
    coefficient_scale_ += m.c.norm() * (1.0 + m.k.cast<double>().norm());
  }
}

FlowEval FourierFlow::eval(const Vec3& x) const {
  CVec3 u = CVec3::Zero();
  Eigen::Matrix3cd grad = Eigen::Matrix3cd::Zero();
  const Complex i_unit(0.0, 1.0);

  for (std::size_t p = 0; p < paired_count_; p += 2) {
    const FourierMode& rep = modes_[p];
    const FourierMode& par = modes_[p + 1];
    const Vec3 k = rep.k.cast<double>();
    const double phase = k.dot(x);
    const Complex e(std::cos(phase), std::sin(phase));
    const CVec3 term = rep.c * e;
    const CVec3 term_conj = par.c * std::conj(e);
    u += term + term_conj;
    // ∂_j of c e^{ik·x} is i k_j c e^{ik·x}; the partner carries −k.
    grad += (i_unit * term) * k.transpose().cast<Complex>();
    grad -= (i_unit * term_conj) * k.transpose().cast<Complex>();
  }
  for (std::size_t p = paired_count_; p < modes_.size(); ++p) {
    u += modes_[p].c;
  }

  const double threshold = 1e-12 * std::max(coefficient_scale_, 1.0);
  const double leak = std::max(u.imag().cwiseAbs().maxCoeff(), grad.imag().cwiseAbs().maxCoeff());
  if (!(leak <= threshold)) {
    throw NumericalError("flow '" + name_ + "': imaginary part does not cancel in evaluation");
  }
  return FlowEval{u.real(), grad.real()};
}

Vec3 FourierFlow::velocity(const Vec3& x) const {
  Vec3 u = Vec3::Zero();
  for (std::size_t p = 0; p < paired_count_; p += 2) {
    const FourierMode& rep = modes_[p];
    const double phase = rep.k.cast<double>().dot(x);
    const Complex e(std::cos(phase), std::sin(phase));
    u += 2.0 * (rep.c * e).real();
  }
  for (std::size_t p = paired_count_; p < modes_.size(); ++p) {
    u += modes_[p].c.real();
  }
  return u;
}

std::array<Mat3, 3> FourierFlow::hessian(const Vec3& x) const {
  std::array<Mat3, 3> h{Mat3::Zero(), Mat3::Zero(), Mat3::Zero()};
  for (std::size_t p = 0; p < paired_count_; p += 2) {
    const FourierMode& rep = modes_[p];
    const Vec3 k = rep.k.cast<double>();
    const double phase = k.dot(x);
    const Complex e(std::cos(phase), std::sin(phase));
    const Mat3 kk = k * k.transpose();
    for (int i = 0; i < 3; ++i) {
      // ∂_j∂_m (c e^{ik·x} + c.c.) = −k_j k_m · 2 Re(c e^{ik·x})
      h[static_cast<std::size_t>(i)] -= 2.0 * (rep.c[i] * e).real() * kk;
    }
  }
  return h;
}

FourierFlow make_abc_flow(double A, double B, double C) {
  const Complex half(0.5, 0.0);
  const Complex minus_i_half(0.0, -0.5);
  // sin θ = (−i/2) e^{iθ} + c.c.,  cos θ = (1/2) e^{iθ} + c.c.
  std::vector<FourierMode> modes;
  const auto add = [&modes](Wavenumber k, CVec3 c) {
    modes.push_back({k, c});
    modes.push_back({-k, c.conjugate()});
  };
  add(Wavenumber(1, 0, 0), CVec3(Complex(0.0), B * minus_i_half, B * half));
  add(Wavenumber(0, 1, 0), CVec3(C * half, Complex(0.0), C * minus_i_half));
  add(Wavenumber(0, 0, 1), CVec3(A * minus_i_half, A * half, Complex(0.0)));

  std::ostringstream name;
  name.precision(17);
  name << "abc(" << A << "," << B << "," << C << ")";
  return FourierFlow(name.str(), std::move(modes));
}

FourierFlow make_shear_flow(const Vec3& U) {
  std::ostringstream name;
  name.precision(17);
  name << "shear(" << U[0] << "," << U[1] << "," << U[2] << ")";
  return FourierFlow(name.str(), {FourierMode{Wavenumber::Zero(), U.cast<Complex>()}});
}

FourierFlow make_kolmogorov_flow(double amplitude) {
  const CVec3 c(Complex(0.0, -0.5 * amplitude), Complex(0.0), Complex(0.0));
  std::ostringstream name;
  name.precision(17);
  name << "kolmogorov(" << amplitude << ")";
  return FourierFlow(name.str(), {FourierMode{Wavenumber(0, 1, 0), c},
                                  FourierMode{Wavenumber(0, -1, 0), c.conjugate()}});
}

}  // namespace eulerspec
