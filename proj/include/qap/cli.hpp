#pragma once

#include <string>
#include <vector>

namespace qap {

// Entry point behind the `qap` binary; exposed so tests can drive the CLI
// in-process. Returns the process exit code: 0 success, 1 usage/input error,
// 2 limit-terminated solve.
int run_cli(const std::vector<std::string>& args);

}  // namespace qap
