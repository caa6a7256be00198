#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "imbed/config.hpp"

namespace imbed {

struct RunFlags {
  std::optional<std::size_t> radius;
  std::optional<std::size_t> words;
  std::size_t ball_cap = kDefaultBallCap;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  bool timing = false;
};

enum ExitCode : int { exit_pass = 0, exit_failure = 1, exit_usage = 2, exit_resource = 3 };

struct RunResult {
  int exit_code = exit_pass;
  Json report;
};

const std::vector<std::string>& command_names();

// Dispatches one command. Module errors become an "error" object in the report
// ({"code", "message"}) with exit code 2, or 3 for resource caps.
RunResult run_command(const std::string& command, const Config& config, const RunFlags& flags);

}  // namespace imbed
