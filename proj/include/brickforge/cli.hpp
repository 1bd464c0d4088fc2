#pragma once

#include <iosfwd>

namespace brickforge {

// Exit codes: 0 all checks pass, 1 mathematical violation, 2 usage or
// operational error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitError = 2;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv);

}  // namespace brickforge
