#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace prbqkd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

/// Runs one CLI invocation. `args` excludes the program name. Data goes to
/// `out` unless --out names a file; diagnostics go to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace prbqkd::cli
