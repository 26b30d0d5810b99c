#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "eulerspec/flow.hpp"

namespace eulerspec {

/// Reads {"name": ..., "modes": [{"k": [..], "re": [..], "im": [..]}, ...]}.
/// Missing conjugate partners are filled in; a listed partner that is not the
/// conjugate is rejected. Throws ValidationError on any schema problem.
FourierFlow flow_from_json(const nlohmann::json& doc);
FourierFlow load_flow_file(const std::filesystem::path& path);

/// Emits every mode (both members of each conjugate pair) in stored order.
nlohmann::json flow_to_json(const FourierFlow& flow);

}  // namespace eulerspec
