#include "eulerspec/report_io.hpp"

#include <iomanip>
#include <limits>

namespace eulerspec {
namespace {

class CsvRow {
 public:
  explicit CsvRow(std::ostream& os) : os_(os) {
    os_ << std::setprecision(std::numeric_limits<double>::max_digits10);
  }
  ~CsvRow() { os_ << '\n'; }

  template <typename T>
  CsvRow& operator<<(const T& v) {
    if (!first_) os_ << ',';
    first_ = false;
    os_ << v;
    return *this;
  }

  CsvRow& operator<<(const Vec3& v) { return *this << v[0] << v[1] << v[2]; }

 private:
  std::ostream& os_;
  bool first_ = true;
};

}  // namespace

void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& record) {
  os << "t,x1,x2,x3,xi1,xi2,xi3,log_xi,H,drift_bxi\n";
  for (const TrajectorySample& s : record.samples) {
    CsvRow(os) << s.t << s.x << s.xi_dir << s.log_xi << s.H << s.drift_bxi;
  }
}

void write_samples_csv(std::ostream& os, std::span<const ExponentSample> samples) {
  os << "x01,x02,x03,xi01,xi02,xi03,T,lambda1,lambda2,drift_H,drift_bxi\n";
  for (const ExponentSample& s : samples) {
    CsvRow(os) << s.x0 << s.xi0 << s.T << s.lambda1 << s.lambda2 << s.drift.max_H_drift << s.drift.max_bxi_drift;
  }
}

void write_interval_strips_csv(std::ostream& os, std::span<const ExponentSample> samples) {
  os << "sample,lambda2,lambda1\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    CsvRow(os) << i << samples[i].lambda2 << samples[i].lambda1;
  }
}

void write_annulus_csv(std::ostream& os, std::span<const AnnulusReport> rows) {
  os << "t,r_inner,r_outer\n";
  for (const AnnulusReport& a : rows) CsvRow(os) << a.t << a.r_inner << a.r_outer;
}

void write_halving_csv(std::ostream& os, const HalvingStudy& study) {
  os << "rtol,lambda1,lambda2,difference\n";
  for (const HalvingRow& r : study.rows) CsvRow(os) << r.rtol << r.lambda1 << r.lambda2 << r.difference;
}

nlohmann::json to_json(const Vec3& v) { return nlohmann::json::array({v[0], v[1], v[2]}); }

nlohmann::json to_json(const SamplePlan& plan) {
  return {{"count", plan.count},
          {"strategy", to_string(plan.strategy)},
          {"seed", plan.seed},
          {"constraint", to_string(plan.constraint)},
          {"horizon", plan.horizon},
          {"checkpoints", plan.checkpoints},
          {"stagnation_directions", plan.stagnation_directions}};
}

nlohmann::json to_json(const GapReport& gap) {
  nlohmann::json cover = nlohmann::json::array();
  for (const Interval& iv : gap.cover) cover.push_back({iv.lo, iv.hi});
  return {{"resolution", gap.resolution}, {"largest_gap", gap.largest_gap}, {"gap", {gap.gap_lo, gap.gap_hi}},
          {"passed", gap.passed},         {"cover", cover}};
}

nlohmann::json to_json(const AnnulusReport& a) {
  return {{"t", a.t}, {"r_inner", a.r_inner}, {"r_outer", a.r_outer}};
}

nlohmann::json to_json(const DriftReport& d) {
  return {{"max_H_drift", d.max_H_drift},
          {"max_bxi_drift", d.max_bxi_drift},
          {"det_jacobian_err", d.det_jacobian_err},
          {"xi_consistency_angle", d.xi_consistency_angle},
          {"xi_magnitude_err", d.xi_magnitude_err},
          {"group_roundtrip_err", d.group_roundtrip_err}};
}

nlohmann::json to_json(const TrajectoryDiagnostics& d) {
  return {{"max_H_drift", d.max_H_drift},
          {"max_bxi_drift", d.max_bxi_drift},
          {"max_xi_norm_correction", d.max_xi_norm_correction},
          {"accepted_steps", d.steps.accepted},
          {"rejected_steps", d.steps.rejected},
          {"rhs_evaluations", d.steps.rhs_evaluations}};
}

nlohmann::json to_json(const ExponentSample& s) {
  nlohmann::json tail = nlohmann::json::array();
  for (const ExponentCheckpoint& c : s.convergence_tail) tail.push_back({c.t, c.lambda1, c.lambda2});
  return {{"x0", to_json(s.x0)},
          {"xi0", to_json(s.xi0)},
          {"T", s.T},
          {"lambda1", s.lambda1},
          {"lambda2", s.lambda2},
          {"log_volume", s.log_volume},
          {"log_xi", s.log_xi},
          {"reorth_count", s.reorth_count},
          {"drift", to_json(s.drift)},
          {"convergence", tail}};
}

nlohmann::json to_json(const SteadinessReport& r) {
  nlohmann::json modes = nlohmann::json::array();
  for (const Wavenumber& k : r.non_solenoidal_modes) modes.push_back({k[0], k[1], k[2]});
  return {{"passed", r.passed},
          {"grid_per_axis", r.grid_per_axis},
          {"tol", r.tol},
          {"curl_residual", r.curl_residual},
          {"divergence_residual", r.divergence_residual},
          {"worst_point", to_json(r.worst_point)},
          {"worst_value", r.worst_value},
          {"non_solenoidal_modes", modes}};
}

nlohmann::json to_json(const HalvingStudy& study) {
  nlohmann::json rows = nlohmann::json::array();
  for (const HalvingRow& r : study.rows) {
    rows.push_back({{"rtol", r.rtol}, {"lambda1", r.lambda1}, {"lambda2", r.lambda2}, {"difference", r.difference}});
  }
  return {{"passed", study.passed}, {"rows", rows}};
}

}  // namespace eulerspec
