#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace framec {

/// Process exit codes of the `framec` tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,        // usage, IO or parse failure
    kExitNoCompletion = 2, // no completion exists / verification failed
    kExitNotAFrame = 3,
    kExitDisagreement = 4, // completion methods disagree
};

/// Runs `framec <subcommand> ...`; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace framec
