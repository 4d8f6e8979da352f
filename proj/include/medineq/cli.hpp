#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace medineq {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 1,
    kExitComputation = 2,
};

/// Runs the tool with `args` (args[0] is the program name). Regular output
/// goes to `out`; every failure prints a single "medineq: error: ..." line
/// to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace medineq
