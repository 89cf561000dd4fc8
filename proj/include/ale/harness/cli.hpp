#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ale::harness {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitRuntime = 2 };

/// Runs the command line `args` (program name excluded). Normal output goes to `out`,
/// diagnostics and usage text to `err`.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_dispatch(int argc, char** argv);

}  // namespace ale::harness
