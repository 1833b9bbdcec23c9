#pragma once

#include <string>
#include <vector>

namespace exoverse::cli {

/// Exit codes: 0 success, 2 input or config error, 3 runtime divergence.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitDiverged = 3;

int run(const std::vector<std::string>& args);
int run(int argc, const char* const* argv);

}  // namespace exoverse::cli
