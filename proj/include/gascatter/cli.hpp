// Command-line front end. `run_cli` is the whole program minus process setup so
// tests can drive it in-process.
//
// Exit codes: 0 success, 2 usage or configuration error, 3 closed channel,
// 4 verification tolerance breached.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gascatter {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitClosedChannel = 3;
inline constexpr int kExitVerifyFailed = 4;

/// Worker threads: hardware concurrency, capped by GASCATTER_THREADS when it
/// holds a positive integer.
[[nodiscard]] unsigned thread_budget();

/// args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gascatter
