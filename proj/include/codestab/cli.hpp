#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace codestab::cli {

enum ExitCode : int {
  kOk = 0,
  kInternalError = 1,
  kUsageError = 2,
  kParseFailure = 3,
  kInsufficientData = 4,
  kIoError = 5,
  kInvalidInput = 6,
};

// Runs the command line `args` (args[0] is the program name). Output goes to
// `out`, diagnostics to `err`; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace codestab::cli
