#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace entropart::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kIo = 3 };

/// Runs the command line `args` (args[0] is the program name). Standard input
/// is read only when an input path is "-".
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace entropart::cli
