#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace signet {

// Full argv including the program name; returns the process exit code.
// 0 ok, 2 config error, 3 unreachable threshold, 4 numerical failure,
// 5 horizon censoring in all replicates.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

} // namespace signet
