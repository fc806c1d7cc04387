#pragma once

#include <string>
#include <vector>

namespace pwqnet {

// Runs a CLI invocation (arguments without the program name) and returns the
// process exit code: 0 pass, 1 mathematical failure (violation or
// counterexample), 2 structural or I/O error, 3 solver failure,
// 4 precondition failure.
int run_cli(const std::vector<std::string>& args);

}  // namespace pwqnet
