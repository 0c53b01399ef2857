#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace aodv {

/// Exit status contract of the command-line tool.
enum ExitStatus : int { kExitHolds = 0, kExitRefuted = 1, kExitError = 2 };

/// Runs the `aodvmc` command line. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace aodv
