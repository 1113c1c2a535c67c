#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rdlm {

// Stable exit code contract.
enum ExitCode : int {
    kExitOk = 0,
    kExitVerifyFailure = 1,
    kExitUsage = 2,
    kExitUnknownToken = 3,
    kExitUndefinedDensity = 4,
};

// Runs one CLI invocation; args excludes the program name. All program output
// goes to out, diagnostics to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rdlm
