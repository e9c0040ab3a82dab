#pragma once

#include <iosfwd>

namespace pararank::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kInternalError = 3 };

/// Runs the command line `argv[1..argc)`. Tabular results go to `out` unless
/// --out names a file; logs and diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pararank::cli
