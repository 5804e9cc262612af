#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace thermimic::cli {

// Exit codes shared by every subcommand.
enum ExitCode : int {
    kOk = 0,
    kUsage = 1,  // no subcommand given
    kConfigError = 2,
    kNumericError = 3,
    kFeasibilityError = 4,
};

// Runs the command line `args` (args[0] is the program name). Diagnostics go to
// `err`, short human-readable summaries to `out`; result files go to --out-dir.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace thermimic::cli
