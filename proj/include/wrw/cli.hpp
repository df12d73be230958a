#pragma once

#include <string>
#include <vector>

namespace wrw::cli {

/// Dispatches one invocation (args exclude the program name).
/// Exit codes: 0 success, 2 validation/usage error, 3 numerical non-convergence.
int run(const std::vector<std::string>& args);

}  // namespace wrw::cli
