#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cmtest::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,    // bad flags, unknown function or parameter, invalid values
    kFile = 3,     // unreadable, malformed or unwritable files
    kInternal = 4, // invariant violations and unexpected failures
};

/// Runs one command line; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace cmtest::cli
