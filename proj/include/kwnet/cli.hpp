#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace kwnet {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the kwnet command-line tool. `args` excludes the program
/// name. Data goes to `out` (or to files), diagnostics to `err`.
int cli_main(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace kwnet
