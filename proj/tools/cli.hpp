#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace opspace::cli {

enum ExitCode : int {
  kOk = 0,
  kAssertionFailed = 1,
  kParseError = 2,
  kNumericalFailure = 3,
};

/// Parses args (without the program name) and runs the selected command.
/// Results go to `out` unless --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace opspace::cli
