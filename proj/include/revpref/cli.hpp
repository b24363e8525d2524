#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace revpref {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitInputError = 2 };

/// Runs `revpref <args...>` (program name excluded), writing JSON or CSV to
/// `out` and diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace revpref
