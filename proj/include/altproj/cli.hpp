#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace altproj::cli {

enum ExitCode : int {
  kOk = 0,
  kInternalError = 1,
  kConfigError = 2,
  kInfeasible = 3,
  kAssertionFailure = 4,
};

/// Runs one subcommand. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace altproj::cli
