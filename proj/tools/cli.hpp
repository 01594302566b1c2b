#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace apx::cli {

enum ExitCode : int { kOk = 0, kViolations = 1, kUsage = 2, kCapExhausted = 3 };

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace apx::cli
