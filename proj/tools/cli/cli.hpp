#pragma once

#include <iosfwd>

namespace franson::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kIo = 3,
    kNonConvergence = 4,
};

/// Entry point of the `franson-sim` tool; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace franson::cli
