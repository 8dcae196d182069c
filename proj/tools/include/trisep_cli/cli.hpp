#pragma once

#include <ostream>

namespace trisep::cli {

enum ExitCode : int {
  kSeparable = 0,
  kOk = 0,
  kUsage = 2,
  kNpt = 3,
  kEdge = 4,
  kNonEdge = 5,
  kUndetermined = 6,
  kVerifyFailed = 7,
};

/// Runs one command line; JSON or text goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace trisep::cli
