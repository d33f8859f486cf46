#pragma once

#include <string>
#include <vector>

namespace povmic {

inline constexpr const char* kToolVersion = "povmic 1.0.0";

/// Runs one command-line invocation (arguments without the program name).
/// Returns the process exit code: 0 success/consistent, 1 usage or IO error,
/// 2 property refuted (a witness is included in the report), 3 undetermined.
int run_cli(const std::vector<std::string>& args);

}  // namespace povmic
