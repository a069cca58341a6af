#pragma once

#include <map>
#include <string>

#include "skg/pipeline.hpp"

namespace skg {

/// Flat `section.key=value` config text: one assignment per line, `#`
/// comments, blank lines ignored. Unknown keys are rejected.
std::map<std::string, std::string> parse_config_text(const std::string& text);

/// Applies environment overrides of the form SKG_<SECTION>_<KEY> on top of
/// the parsed assignments, then builds the config.
ExperimentConfig config_from_kv(const std::map<std::string, std::string>& kv,
                                bool apply_env_overrides = true);

/// parse_config_text + config_from_kv over a file on disk.
/// Throws std::invalid_argument (config error) on any problem.
ExperimentConfig load_config_file(const std::string& path);

/// Defaults when no config file is given (env overrides still apply).
ExperimentConfig default_config();

}  // namespace skg
