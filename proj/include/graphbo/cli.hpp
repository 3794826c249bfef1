#pragma once

#include <string>
#include <vector>

namespace graphbo {

// Entry point behind the `graphbo` binary; exposed for testing. Returns the
// process exit code: 0 iff the requested command completed in full.
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);  // args without argv[0]

}  // namespace graphbo
