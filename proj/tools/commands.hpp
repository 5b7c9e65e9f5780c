#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace paradet::cli {

enum ExitCode { kOk = 0, kUsage = 2, kMissingResource = 3 };

// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace paradet::cli
