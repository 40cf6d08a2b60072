#pragma once

#include <iosfwd>

namespace phonemv::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one `phonemv` invocation. Returns 0 on success, 1 on a domain or
/// validation failure, 2 on a usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace phonemv::cli
