#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace decorr {

// Exit codes of the decorr command line.
enum ExitCode : int {
    kExitOk = 0,
    kExitVerificationFailed = 1,
    kExitInputError = 2,
    kExitInfeasible = 3,
};

// Runs one CLI invocation. args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace decorr
