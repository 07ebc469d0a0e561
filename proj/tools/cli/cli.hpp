// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vidsum::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitUsage = 64;

/// Runs one `vidsum` invocation. args[0] is the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vidsum::cli
