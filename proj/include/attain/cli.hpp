#pragma once

#include <iosfwd>

namespace attain::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitVerificationFailed = 2;

/// Entry point of the `attain` command line tool, writing to the given streams.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace attain::cli
