#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "run_config.hpp"

namespace eulerspec::cli {

inline constexpr const char* kOutputDirEnv = "EULERSPEC_OUTPUT_DIR";

/// Explicit directory, else $EULERSPEC_OUTPUT_DIR, else ./eulerspec-out.
std::filesystem::path resolve_output_dir(const std::filesystem::path& requested);

// Each command writes its files into config.output_dir (created on demand),
// always including config.toml, prints a short summary to `out` and returns
// the process exit code. Library errors propagate as exceptions.
int cmd_check_flow(RunConfig config, std::ostream& out);
int cmd_trace(RunConfig config, std::ostream& out);
int cmd_exponents(RunConfig config, std::ostream& out);
int cmd_spectrum(RunConfig config, std::ostream& out);
int cmd_audit(RunConfig config, std::ostream& out);

/// Parses arguments, dispatches, and maps failures to exit codes:
/// 0 success, 1 numerical or I/O failure, 2 invalid input.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace eulerspec::cli
