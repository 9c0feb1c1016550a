#pragma once

#include <iosfwd>

namespace hurst {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Entry point behind the `hurst` executable. Subcommands: simulate, estimate,
/// critvals, power, analyze, selftest.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hurst
