#include "cli/run_config.hpp"

#include "herdsig/fileutil.hpp"

#ifndef HERDSIG_VERSION
#define HERDSIG_VERSION "0.0.0"
#endif

namespace herdsig::cli {

const char* tool_version() { return HERDSIG_VERSION; }

std::string run_config_json(const RunConfig& config) {
  nlohmann::ordered_json doc;
  doc["tool"] = kToolName;
  doc["version"] = tool_version();
  doc["subcommand"] = config.subcommand;
  doc["config"] = config.settings;
  return doc.dump(2) + "\n";
}

void write_run_config(const std::filesystem::path& dir, const RunConfig& config) {
  write_file_atomic(dir / "run.json", run_config_json(config));
}

std::filesystem::path output_dir(const std::filesystem::path& output) {
  return output.has_parent_path() ? output.parent_path() : std::filesystem::path(".");
}

}  // namespace herdsig::cli
