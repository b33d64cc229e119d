#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gplab::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kPremiseViolated = 2,
  kPrecisionExhausted = 3,
  kUsage = 64,
};

/// Runs one command line (without the program name). Results go to `out`;
/// diagnostics and the resolved configuration go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gplab::cli
