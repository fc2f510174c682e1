#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pwl::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kPrecondition = 3,
  kIo = 4,
  kStructural = 5,
};

/// Runs one command line (without the program name) and returns the exit
/// code. Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pwl::cli
