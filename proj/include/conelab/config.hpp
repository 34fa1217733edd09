// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

namespace conelab::config {

/// Executes one CLI-level command ("count", "density", "fit", ...) against a
/// JSON configuration and returns the JSON report as a string. Throws Error
/// with errc::config_invalid for malformed configs.
std::string run_command(const std::string& command, const std::string& config_json);

/// Names of all supported commands.
const char* const* command_names(size_t* count);

} // namespace conelab::config
