#pragma once

#include <iosfwd>

namespace seqdist::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidSpec = 2;
inline constexpr int kExitIo = 3;

/// Entry point of the `seqdist` command; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace seqdist::cli
