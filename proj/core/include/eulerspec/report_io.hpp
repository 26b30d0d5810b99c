#pragma once

#include <ostream>
#include <span>

#include <nlohmann/json.hpp>

#include "eulerspec/spectrum.hpp"
#include "eulerspec/verify.hpp"

namespace eulerspec {

// CSV writers. Each writes its header line followed by one row per record;
// numbers use 17 significant digits so files round-trip exactly.

/// t,x1,x2,x3,xi1,xi2,xi3,log_xi,H,drift_bxi (xi columns hold the unit direction)
void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& record);

/// x01,x02,x03,xi01,xi02,xi03,T,lambda1,lambda2,drift_H,drift_bxi
void write_samples_csv(std::ostream& os, std::span<const ExponentSample> samples);

/// sample,lambda2,lambda1 — one exponent-interval strip per sample
void write_interval_strips_csv(std::ostream& os, std::span<const ExponentSample> samples);

/// t,r_inner,r_outer
void write_annulus_csv(std::ostream& os, std::span<const AnnulusReport> rows);

/// rtol,lambda1,lambda2,difference
void write_halving_csv(std::ostream& os, const HalvingStudy& study);

nlohmann::json to_json(const Vec3& v);
nlohmann::json to_json(const SamplePlan& plan);
nlohmann::json to_json(const GapReport& gap);
nlohmann::json to_json(const AnnulusReport& a);
nlohmann::json to_json(const DriftReport& d);
nlohmann::json to_json(const ExponentSample& s);
nlohmann::json to_json(const TrajectoryDiagnostics& d);
nlohmann::json to_json(const SteadinessReport& r);
nlohmann::json to_json(const HalvingStudy& study);

}  // namespace eulerspec
