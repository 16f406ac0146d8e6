#pragma once

#include <iosfwd>

namespace ruelle {

/// Exit codes of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2 };

/// Entry point of the `ruelle` tool: validate | spectrum | determinant |
/// bounds. Primary results go to `out`, diagnostics to `err`; with --out the
/// results are also written to <dir>/<command>-<system-id>.{csv,json}.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ruelle
