#include "run_config.hpp"

#include <charconv>
#include <cstdio>
#include <ostream>
#include <system_error>

#include "eulerspec/errors.hpp"
#include "eulerspec/flow_io.hpp"
#include "eulerspec/report_io.hpp"

namespace eulerspec::cli {

FourierFlow build_flow(const FlowSource& source) {
  if (!source.file.empty()) return load_flow_file(source.file);
  if (source.catalog == "abc") return make_abc_flow(source.abc[0], source.abc[1], source.abc[2]);
  if (source.catalog == "shear") return make_shear_flow(source.shear);
  if (source.catalog == "kolmogorov") return make_kolmogorov_flow(source.amplitude);
  throw ValidationError("unknown catalog flow '" + source.catalog + "' (expected abc, shear or kolmogorov)");
}

nlohmann::json config_json(const RunConfig& config, const FourierFlow& flow) {
  const ExponentControls& ex = config.exponents;
  const IntegratorControls& in = ex.integrator;
  SamplePlan plan = config.plan;
  plan.horizon = config.T;
  return {{"command", config.command},
          {"flow", flow_to_json(flow)},
          {"x0", to_json(config.x0)},
          {"xi0", to_json(config.xi0)},
          {"T", config.T},
          {"cadence", config.cadence},
          {"plan", to_json(plan)},
          {"integrator",
           {{"rtol", in.rtol},
            {"atol", in.atol},
            {"initial_step", in.initial_step},
            {"max_step", in.max_step},
            {"max_steps", in.max_steps}}},
          {"exponents",
           {{"reorth_interval", ex.reorth_interval},
            {"max_condition", ex.max_condition},
            {"frame_seed", ex.frame_seed}}},
          {"gap_resolution", config.gap_resolution},
          {"steady_tol", config.steady_tol},
          {"steady_grid", config.steady_grid},
          {"annulus_t", config.annulus_times},
          {"halving_tol", config.halving_tolerances}};
}

std::string config_hash(const nlohmann::json& canonical) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".eni") == std::string::npos) s += ".0";
  return s;
}

double parse_real(const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) throw ValidationError("not a real number: '" + text + "'");
  return v;
}

namespace {

std::string toml_string(const std::string& s) { return nlohmann::json(s).dump(); }

std::string toml_array(const double* v, std::size_t n) {
  std::string s = "[";
  for (std::size_t i = 0; i < n; ++i) {
    if (i) s += ", ";
    s += format_real(v[i]);
  }
  return s + "]";
}

std::string toml_array(const Vec3& v) { return toml_array(v.data(), 3); }
std::string toml_array(const std::vector<double>& v) { return toml_array(v.data(), v.size()); }

}  // namespace

void write_config_toml(std::ostream& os, const RunConfig& c) {
  const auto kv = [&os](const char* key, const std::string& value) { os << key << " = " << value << '\n'; };
  const IntegratorControls& in = c.exponents.integrator;

  os << "# eulerspec " << c.command << " run configuration\n";
  if (!c.flow.file.empty()) {
    kv("flow-file", toml_string(c.flow.file.string()));
  } else {
    kv("flow", toml_string(c.flow.catalog));
    kv("abc", toml_array(c.flow.abc));
    kv("shear-u", toml_array(c.flow.shear));
    kv("amplitude", format_real(c.flow.amplitude));
  }
  kv("x0", toml_array(c.x0));
  kv("xi0", toml_array(c.xi0));
  kv("horizon", format_real(c.T));
  kv("cadence", format_real(c.cadence));

  kv("count", std::to_string(c.plan.count));
  kv("strategy", toml_string(to_string(c.plan.strategy)));
  kv("seed", std::to_string(c.plan.seed));
  kv("constraint", toml_string(to_string(c.plan.constraint)));
  if (!c.plan.checkpoints.empty()) kv("checkpoints", toml_array(c.plan.checkpoints));
  kv("stagnation-directions", std::to_string(c.plan.stagnation_directions));

  kv("rtol", format_real(in.rtol));
  kv("atol", format_real(in.atol));
  kv("initial-step", format_real(in.initial_step));
  kv("max-step", format_real(in.max_step));
  kv("max-steps", std::to_string(in.max_steps));
  kv("reorth-interval", format_real(c.exponents.reorth_interval));
  kv("max-condition", format_real(c.exponents.max_condition));
  kv("frame-seed", std::to_string(c.exponents.frame_seed));

  kv("threads", std::to_string(c.threads));
  kv("gap-resolution", format_real(c.gap_resolution));
  kv("steady-tol", format_real(c.steady_tol));
  kv("steady-grid", std::to_string(c.steady_grid));
  kv("annulus-t", toml_array(c.annulus_times));
  kv("halving-tol", toml_array(c.halving_tolerances));
}

}  // namespace eulerspec::cli
