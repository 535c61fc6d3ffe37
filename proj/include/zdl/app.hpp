#pragma once

#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace zdl {

enum ExitStatus : int { exit_ok = 0, exit_failure = 1, exit_invalid = 2, exit_check_failed = 3 };

/// key=value lines; blank lines and lines starting with '#' are skipped.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

/// Appends --key=value for every config entry whose flag is not already on the
/// command line, so explicit flags win.
std::vector<std::string> merge_config(std::vector<std::string> args, const std::map<std::string, std::string>& config);

/// Parses and runs one zdl command. args[0] is the program name.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace zdl
