#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace paultrap::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitDomainError = 1,
  kExitUsageError = 2,
};

/// Runs one command line (args excludes the program name). Numeric output
/// goes to --output or `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

const char* tool_version();

}  // namespace paultrap::cli
