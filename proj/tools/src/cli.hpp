#pragma once

#include <iosfwd>

namespace sidebp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitCheckFailed = 3;

/// Entry point behind the `sidebp` executable. Results go to `out` unless
/// --out names a file; diagnostics and usage go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sidebp::cli
