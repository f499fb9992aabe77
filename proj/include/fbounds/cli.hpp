#pragma once

#include <iosfwd>

namespace fbounds {

/// Exit codes: 0 success, 1 usage or argument error, 2 degenerate constraint function.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDegenerate = 2;

/// Entry point shared by the executable and the in-process tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fbounds
