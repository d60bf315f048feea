#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace priming {

// Entry point shared by the `priming` binary and the tests. `args` excludes
// the program name. Returns the process exit status.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace priming
