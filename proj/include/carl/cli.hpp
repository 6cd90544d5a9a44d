#pragma once

#include <string>
#include <vector>

#include "carl/config.hpp"

namespace carl {

inline constexpr const char* kVersion = "1.0.0";

struct CommandResult {
  int status = 0;  // 0 all checks pass, 2 a check failed, 1 usage or config error
  std::vector<std::string> artifacts;
  std::vector<std::string> flags;
  std::string summary;
};

const std::vector<std::string>& command_names();

/// Runs one command and writes its artifacts plus manifest.json into out_dir.
CommandResult run_command(const std::string& name, const RunConfig& cfg, const std::string& out_dir,
                          bool strict = false, int threads = 0);

int run_cli(int argc, char** argv);

}  // namespace carl
