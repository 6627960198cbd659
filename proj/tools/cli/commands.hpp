#pragma once

#include "ucp/errors.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace ucp::cli {

// Process exit codes. Stable: scripts rely on them.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;  // bad flags, unreadable config, unknown unit
inline constexpr int kExitData = 3;    // empty or unusable input data
inline constexpr int kExitSolver = 4;  // solver failure or unphysical parameters

int exit_code(ErrorKind kind) noexcept;

/// Runs the tool on argv-style arguments (without the program name) and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ucp::cli
