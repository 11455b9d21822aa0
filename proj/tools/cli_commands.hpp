#pragma once

#include <CLI11.hpp>

#include <string>
#include <vector>

namespace cli {

enum ExitCode : int { kSuccess = 0, kNotConverged = 1, kUsage = 2 };

/// Appends `--key value` for every key=value line of the file named by
/// --config that is not already given on the command line.
std::vector<std::string> merge_config_file(std::vector<std::string> args);

/// Registers every subcommand on `app`. The returned int is set by the
/// callback of whichever command ran.
void register_commands(CLI::App &app, int &exit_code);

} // namespace cli
