#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pulsetrain::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumeric = 1;
inline constexpr int kExitUsage = 2;

/// Runs one subcommand.  `args` excludes the program name.  Tables go to the
/// --output file (written atomically) or to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Runs the named criteria (all when empty); one line per criterion on `out`.
/// Returns kExitOk only if every selected criterion passes.
int run_checks(const std::vector<std::string>& only, double tolerance_scale, std::ostream& out,
               std::ostream& err);

}  // namespace pulsetrain::cli
