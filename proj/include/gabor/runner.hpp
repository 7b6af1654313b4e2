#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gabor {

/// One driver invocation: a subcommand plus the shared flags.
struct RunOptions {
  std::string command;
  std::string config_path;
  std::vector<std::string> overrides;  // "path.to.key=value"
  std::string out_dir = ".";
  int threads = 0;
  std::optional<std::uint64_t> seed;  // overrides the config's global seed
};

/// Executes one subcommand: loads and validates the configuration, runs the
/// requested operation, and writes its artifacts plus manifest.json (fully
/// determined by config and seed) and run_meta.json (timestamp, thread
/// count). Returns the process exit code: 0 on success, 1 after a validation
/// failure, 2 after a numeric failure; failures are printed to stderr.
int run_command(const RunOptions& opts);

}  // namespace gabor
