#pragma once

#include <ostream>

namespace vstar {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitBackend = 3,
  kExitData = 4,
};

/// Entry point of the `vstar` tool. Results go to files under --out,
/// summaries to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vstar
