#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

namespace herdsig::cli {

inline constexpr const char* kToolName = "herdsig";
const char* tool_version();

// Resolved settings of one invocation, echoed into run.json next to its outputs.
struct RunConfig {
  std::string subcommand;
  nlohmann::ordered_json settings = nlohmann::ordered_json::object();
};

std::string run_config_json(const RunConfig& config);

// Writes run.json into `dir` (created when missing).
void write_run_config(const std::filesystem::path& dir, const RunConfig& config);

// Directory that holds `output`, "." for a bare file name.
std::filesystem::path output_dir(const std::filesystem::path& output);

}  // namespace herdsig::cli
