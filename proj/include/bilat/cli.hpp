#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bilat::cli {

/// Runs the `bilat` command line. `args` excludes the program name.
/// Returns 0 on success, 1 on a data or computation error, 2 on a usage error.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace bilat::cli
