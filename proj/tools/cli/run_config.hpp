#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "eulerspec/flow.hpp"
#include "eulerspec/spectrum.hpp"

namespace eulerspec::cli {

/// Where the velocity field comes from: a catalog entry or a flow file.
struct FlowSource {
  std::string catalog = "abc";  ///< abc | shear | kolmogorov; ignored when file is set
  Vec3 abc = Vec3::Ones();      ///< (A, B, C)
  Vec3 shear = Vec3::UnitX();   ///< U
  double amplitude = 1.0;       ///< Kolmogorov a
  std::filesystem::path file;
};

/// Everything a run depends on. Persisted next to the outputs so the run can be
/// repeated from that file alone.
struct RunConfig {
  std::string command;
  FlowSource flow;

  Vec3 x0 = Vec3(0.1, 0.2, 0.3);
  Vec3 xi0 = Vec3::UnitZ();
  /// Horizon shared by trace, exponents, audit and spectrum.
  double T = 50.0;
  /// Trajectory dump spacing; 0 writes the endpoints only.
  double cadence = 0.1;

  SamplePlan plan;
  ExponentControls exponents;
  unsigned threads = 0;
  double gap_resolution = 0.0;
  double steady_tol = kDefaultSteadyTol;
  int steady_grid = 0;  ///< 0 picks default_steady_grid

  std::vector<double> annulus_times = {0.0, 1.0, 5.0};
  std::vector<double> halving_tolerances = {1e-8, 1e-9, 1e-10, 1e-11};

  std::filesystem::path output_dir;
};

FourierFlow build_flow(const FlowSource& source);

/// Canonical description of everything that affects results. The output
/// directory and thread count are left out; a flow file contributes its
/// modes, not its path.
nlohmann::json config_json(const RunConfig& config, const FourierFlow& flow);

/// 16 hex digits of FNV-1a over the compact dump of config_json.
std::string config_hash(const nlohmann::json& canonical);

/// TOML readable back through --config. Every key matches a long option name.
void write_config_toml(std::ostream& os, const RunConfig& config);

/// Shortest decimal that reads back to the same double.
std::string format_real(double v);

/// Full-string strict parse; throws ValidationError.
double parse_real(const std::string& text);

}  // namespace eulerspec::cli
