#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mixlaw::cli {

/// Process exit codes.
enum ExitCode : int {
    ok = 0,
    violates = 1,
    domain_error = 2,
    inconclusive = 3,
    usage = 64,
    data_format = 65,
    io_error = 73,
};

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace mixlaw::cli
