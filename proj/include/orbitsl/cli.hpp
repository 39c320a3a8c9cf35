// Command-line frontend, callable in-process.
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace orbitsl::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kConfigParse = 2,
    kInfeasible = 3,
    kNonConvergence = 4,
    kConfigInvalid = 5,
};

/// Runs the CLI with `args` (excluding the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace orbitsl::cli
