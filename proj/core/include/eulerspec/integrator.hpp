#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include <Eigen/Core>

#include "eulerspec/errors.hpp"

namespace eulerspec {

/// Settings shared by every integration in the library.
struct IntegratorControls {
  double rtol = 1e-10;
  double atol = 1e-12;
  /// 0 picks the first step automatically.
  double initial_step = 0.0;
  double max_step = 1.0;
  long max_steps = 100'000'000;
};

struct StepStatistics {
  long accepted = 0;
  long rejected = 0;
  long rhs_evaluations = 0;
  double smallest_step = std::numeric_limits<double>::infinity();
  double largest_step = 0.0;
};

/// Dormand–Prince 5(4) embedded pair with local extrapolation and an
/// elementary step-size controller.
///
/// Rhs is any callable `void(const State& y, State& dydt)`; the systems in this
/// library are autonomous. Steps never overshoot the requested end time, so
/// callers hit checkpoints exactly. After an accepted step the caller may edit
/// the state through set_state (renormalization, re-projection); that
/// invalidates the cached first stage.
///
/// Error weights are atol + rtol·min(|y_i|, cap_i). A finite cap is used for
/// periodic coordinates, whose magnitude grows without carrying information.
template <int N, typename Rhs>
class DormandPrince54 {
 public:
  using State = Eigen::Matrix<double, N, 1>;

  DormandPrince54(Rhs rhs, const State& y0, double t0, const IntegratorControls& controls)
      : rhs_(std::move(rhs)), controls_(controls), t_(t0), y_(y0) {
    magnitude_cap_.setConstant(std::numeric_limits<double>::infinity());
  }

  void set_magnitude_cap(int component, double cap) { magnitude_cap_[component] = cap; }

  double time() const noexcept { return t_; }
  const State& state() const noexcept { return y_; }
  const StepStatistics& statistics() const noexcept { return stats_; }
  double last_step() const noexcept { return last_step_; }

  void set_state(const State& y) {
    y_ = y;
    have_k1_ = false;
  }

  /// Performs one accepted step toward t_end, clipped so it never passes it.
  /// Returns the new time. Throws StepUnderflowError or NumericalError.
  double step_toward(double t_end) {
    const double span = t_end - t_;
    if (span == 0.0) return t_;
    const double dir = span > 0.0 ? 1.0 : -1.0;

    if (!have_k1_) {
      evaluate(y_, k1_);
      have_k1_ = true;
    }
    if (h_ == 0.0) h_ = initial_step(dir);

    while (true) {
      double h = std::min(std::abs(h_), controls_.max_step);
      bool clipped = false;
      if (h >= std::abs(span)) {
        h = std::abs(span);
        clipped = true;
      }
      h *= dir;

      const double min_step = 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t_), 1.0);
      if (std::abs(h) < min_step && !clipped) {
        std::ostringstream os;
        os << "step size underflow at t = " << t_;
        throw StepUnderflowError(os.str(), t_);
      }
      if (stats_.accepted + stats_.rejected >= controls_.max_steps) {
        std::ostringstream os;
        os << "tolerance not met within " << controls_.max_steps << " steps; reached t = " << t_;
        throw NumericalError(os.str());
      }

      const double err = attempt(h);
      if (!std::isfinite(err)) {
        ++stats_.rejected;
        h_ = 0.1 * h;
        continue;
      }
      if (err <= 1.0) {
        const double factor = err == 0.0 ? kMaxGrowth
                                         : std::clamp(kSafety * std::pow(err, -0.2), kMinShrink, kMaxGrowth);
        // A clipped step says nothing about the natural step size, so only grow
        // from it when it was not artificially short.
        const double proposed = std::abs(h) * (rejected_last_ ? std::min(factor, 1.0) : factor);
        if (!clipped || proposed > std::abs(h_)) h_ = dir * proposed;
        t_ = clipped ? t_end : t_ + h;
        y_ = y_new_;
        k1_ = k7_;
        rejected_last_ = false;
        ++stats_.accepted;
        stats_.smallest_step = std::min(stats_.smallest_step, std::abs(h));
        stats_.largest_step = std::max(stats_.largest_step, std::abs(h));
        last_step_ = h;
        return t_;
      }
      ++stats_.rejected;
      rejected_last_ = true;
      h_ = h * std::max(kMinShrink, kSafety * std::pow(err, -0.2));
    }
  }

  /// Steps until t_end is reached exactly.
  void advance_to(double t_end) {
    while (t_ != t_end) step_toward(t_end);
  }

 private:
  static constexpr double kSafety = 0.9;
  static constexpr double kMinShrink = 0.2;
  static constexpr double kMaxGrowth = 5.0;

  void evaluate(const State& y, State& dydt) {
    rhs_(y, dydt);
    ++stats_.rhs_evaluations;
  }

  double weight(int i, double a, double b) const {
    return controls_.atol + controls_.rtol * std::min(std::max(std::abs(a), std::abs(b)), magnitude_cap_[i]);
  }

  // Hairer–Nørsett–Wanner starting step heuristic.
  double initial_step(double dir) {
    if (controls_.initial_step > 0.0) return dir * controls_.initial_step;
    double d0 = 0.0, d1 = 0.0;
    for (int i = 0; i < y_.size(); ++i) {
      const double w = weight(i, y_[i], y_[i]);
      d0 += (y_[i] / w) * (y_[i] / w);
      d1 += (k1_[i] / w) * (k1_[i] / w);
    }
    d0 = std::sqrt(d0 / y_.size());
    d1 = std::sqrt(d1 / y_.size());
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, controls_.max_step);

    State y1 = y_ + dir * h0 * k1_;
    State f1;
    evaluate(y1, f1);
    double d2 = 0.0;
    for (int i = 0; i < y_.size(); ++i) {
      const double w = weight(i, y_[i], y_[i]);
      d2 += ((f1[i] - k1_[i]) / w) * ((f1[i] - k1_[i]) / w);
    }
    d2 = std::sqrt(d2 / y_.size()) / h0;
    const double dmax = std::max(d1, d2);
    const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
    return dir * std::min({100.0 * h0, h1, controls_.max_step});
  }

  double attempt(double h) {
    constexpr double a21 = 1.0 / 5.0;
    constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                     a54 = -212.0 / 729.0;
    constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                     a65 = -5103.0 / 18656.0;
    constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0, b5 = -2187.0 / 6784.0,
                     b6 = 11.0 / 84.0;
    constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                     e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

    State tmp;
    tmp = y_ + h * a21 * k1_;
    evaluate(tmp, k2_);
    tmp = y_ + h * (a31 * k1_ + a32 * k2_);
    evaluate(tmp, k3_);
    tmp = y_ + h * (a41 * k1_ + a42 * k2_ + a43 * k3_);
    evaluate(tmp, k4_);
    tmp = y_ + h * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_);
    evaluate(tmp, k5_);
    tmp = y_ + h * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_);
    evaluate(tmp, k6_);
    y_new_ = y_ + h * (b1 * k1_ + b3 * k3_ + b4 * k4_ + b5 * k5_ + b6 * k6_);
    evaluate(y_new_, k7_);

    const State err_vec = h * (e1 * k1_ + e3 * k3_ + e4 * k4_ + e5 * k5_ + e6 * k6_ + e7 * k7_);
    double sum = 0.0;
    for (int i = 0; i < y_.size(); ++i) {
      const double r = err_vec[i] / weight(i, y_[i], y_new_[i]);
      sum += r * r;
    }
    return std::sqrt(sum / y_.size());
  }

  Rhs rhs_;
  IntegratorControls controls_;
  double t_;
  double h_ = 0.0;
  double last_step_ = 0.0;
  bool have_k1_ = false;
  bool rejected_last_ = false;
  State y_, y_new_;
  State k1_, k2_, k3_, k4_, k5_, k6_, k7_;
  State magnitude_cap_;
  StepStatistics stats_;
};

}  // namespace eulerspec
