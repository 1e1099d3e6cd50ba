#pragma once
// Command-line front end. Exit status: 0 success, 2 bad input or usage,
// 1 internal failure.

#include <iosfwd>

namespace softedit {

inline constexpr const char* kThreadsEnv = "SOFTEDIT_THREADS";

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace softedit
