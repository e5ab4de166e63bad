#pragma once

#include <map>
#include <string>
#include <vector>

#include "qclab/report.hpp"

namespace qclab::cli {

struct CommandResult {
  nlohmann::json payload;
  /// File name -> contents, written next to report.json.
  std::map<std::string, std::string> sidecars;
  bool pass = false;
};

/// Canonical command names, in help order.
const std::vector<std::string>& command_names();
/// Accepts dashes or underscores; throws ConfigError on an unknown command.
std::string canonical_command(const std::string& name);

/// Runs a command. Reads its keys from the config (filling in defaults),
/// rejects keys it does not know, and reports pass flags under "checks".
CommandResult run_command(RunConfig& config);

/// Runs the command and wraps the result; wall-clock lives outside the payload.
ReportEnvelope run_envelope(RunConfig& config, CommandResult* result = nullptr);

}  // namespace qclab::cli
