#pragma once

#include <iosfwd>

namespace sagesimplex::cli {

enum ExitCode : int {
  kCertified = 0,
  kFalsified = 1,
  kInconclusive = 2,
  kInputError = 3,
};

/// Runs one command line. JSON results go to `out`, diagnostics to `err`.
/// Always returns one of the four exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sagesimplex::cli
