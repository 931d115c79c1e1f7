#pragma once

#include <string>
#include <vector>

namespace fastslow {

inline constexpr const char* tool_version = "0.1.0";

// Exit codes: 0 ok, 1 parameter validation failure, 2 acceptance failure
// (a slope or residual criterion missed), 64 unreadable config, 66 unwritable
// output directory.
int run_cli(const std::vector<std::string>& args);

} // namespace fastslow
