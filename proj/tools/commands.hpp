#pragma once

#include <iosfwd>

namespace vslicer::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitDegenerate = 2;
inline constexpr int kExitResource = 3;

/// Parses argv, runs one subcommand and writes its rows to --out (or `out`).
/// Diagnostics go to `err`. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vslicer::cli
