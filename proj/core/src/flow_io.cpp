#include "eulerspec/flow_io.hpp"

#include <fstream>
#include <map>
#include <tuple>

#include "eulerspec/errors.hpp"

namespace eulerspec {
namespace {

using Complex = std::complex<double>;

template <typename T>
std::array<T, 3> triple(const nlohmann::json& mode, const char* field, std::size_t index) {
  const auto it = mode.find(field);
  if (it == mode.end()) {
    if (std::string(field) == "im") return {T{}, T{}, T{}};
    throw ValidationError("flow file: mode " + std::to_string(index) + " lacks field '" + field + "'");
  }
  if (!it->is_array() || it->size() != 3) {
    throw ValidationError("flow file: mode " + std::to_string(index) + " field '" + field +
                          "' must be an array of 3 numbers");
  }
  std::array<T, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& v = (*it)[i];
    if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) {
        throw ValidationError("flow file: mode " + std::to_string(index) + " wavenumber must be integer");
      }
    } else if (!v.is_number()) {
      throw ValidationError("flow file: mode " + std::to_string(index) + " field '" + field + "' is not numeric");
    }
    out[i] = v.get<T>();
  }
  return out;
}

}  // namespace

FourierFlow flow_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ValidationError("flow file: top level must be an object");
  const std::string name = doc.value("name", std::string("user-flow"));
  const auto modes_it = doc.find("modes");
  if (modes_it == doc.end() || !modes_it->is_array()) {
    throw ValidationError("flow file: 'modes' must be an array");
  }

  std::vector<FourierMode> modes;
  std::map<std::tuple<int, int, int>, std::size_t> index;
  for (std::size_t n = 0; n < modes_it->size(); ++n) {
    const auto& m = (*modes_it)[n];
    if (!m.is_object()) throw ValidationError("flow file: mode " + std::to_string(n) + " is not an object");
    const auto k = triple<int>(m, "k", n);
    const auto re = triple<double>(m, "re", n);
    const auto im = triple<double>(m, "im", n);
    FourierMode mode{Wavenumber(k[0], k[1], k[2]),
                     CVec3(Complex(re[0], im[0]), Complex(re[1], im[1]), Complex(re[2], im[2]))};
    index.emplace(std::make_tuple(k[0], k[1], k[2]), modes.size());
    modes.push_back(mode);
  }

  const std::size_t listed = modes.size();
  for (std::size_t n = 0; n < listed; ++n) {
    const Wavenumber minus_k = -modes[n].k;
    if (modes[n].k.isZero()) continue;
    if (index.find(std::make_tuple(minus_k[0], minus_k[1], minus_k[2])) == index.end()) {
      index.emplace(std::make_tuple(minus_k[0], minus_k[1], minus_k[2]), modes.size());
      modes.push_back(FourierMode{minus_k, modes[n].c.conjugate()});
    }
  }
  return FourierFlow(name, std::move(modes));
}

FourierFlow load_flow_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open flow file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("flow file " + path.string() + ": " + e.what());
  }
  return flow_from_json(doc);
}

nlohmann::json flow_to_json(const FourierFlow& flow) {
  nlohmann::json modes = nlohmann::json::array();
  for (const FourierMode& m : flow.modes()) {
    modes.push_back({{"k", {m.k[0], m.k[1], m.k[2]}},
                     {"re", {m.c[0].real(), m.c[1].real(), m.c[2].real()}},
                     {"im", {m.c[0].imag(), m.c[1].imag(), m.c[2].imag()}}});
  }
  return {{"name", flow.name()}, {"modes", modes}};
}

}  // namespace eulerspec
