#pragma once

#include "fastslow/experiments.hpp"

#include <filesystem>
#include <string>

namespace fastslow {

// Flat key = value config files; '#' starts a comment, lists are
// space-separated. See configs/p1.cfg for the documented schema.
ExperimentConfig load_config(const std::filesystem::path& path);

// Raw file bytes of the last successful load, for manifest hashing.
ExperimentConfig parse_config_text(const std::string& text);

std::string config_schema_hint();

} // namespace fastslow
