#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hazop {

/// Process exit codes of the `hazop` command.
enum ExitCode : int {
  kExitOk = 0,
  kExitDiagnostics = 1,  // error-level diagnostics
  kExitUsage = 2,
  kExitIo = 3,
};

/// Runs the command line; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hazop
