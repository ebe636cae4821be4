#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace kgring::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,
    exit_domain = 2,
    exit_verification = 3,
};

/// Runs one command line (args excludes the program name). Results go to
/// `out` unless --out names a file; errors go to `err` as one JSON object.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace kgring::cli
