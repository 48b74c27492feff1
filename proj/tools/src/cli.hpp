#pragma once

#include <ostream>

namespace dcesim::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_check_failed = 1,
    exit_usage = 2,
    exit_integration = 3,
};

/// Entry point of the `dcesim` tool; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dcesim::cli
