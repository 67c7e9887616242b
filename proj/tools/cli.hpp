#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ifb::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_config_error = 2;
inline constexpr int exit_runtime_error = 3;

// Runs the ifbsim command line; args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ifb::cli
