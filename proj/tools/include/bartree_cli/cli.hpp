#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bartree::cli {

enum ExitCode : int { kOk = 0, kOperational = 1, kUsage = 2 };

// Runs one command line (args[0] is the program name). Results go to
// `out`, diagnostics and usage text to `err`.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out,
                 std::ostream& err);

}  // namespace bartree::cli
