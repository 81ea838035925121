#pragma once

#include <string>
#include <vector>

namespace semsub::cli {

// Runs a full CLI invocation (subcommand plus flags, without the program
// name). Returns the process exit status: 0 success, 2 input/usage error,
// 3 numerical failure. Diagnostics go to stderr as single lines.
int run(const std::vector<std::string>& args);

}  // namespace semsub::cli
