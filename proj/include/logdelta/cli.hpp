#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace logdelta::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 1, kNumerical = 2 };

/// key = value lines; '#' starts a comment. Throws std::invalid_argument on a
/// malformed line.
std::map<std::string, std::string> parse_config_text(const std::string& text);

/// Rewrites argv so that settings from `--config FILE` become `--key value`
/// arguments placed before the command line ones. Keys already given on the
/// command line are skipped, so flags win over the file.
std::vector<std::string> expand_config(const std::vector<std::string>& args);

/// Entry point; args excludes the program name. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace logdelta::cli
