#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "riskrev/polytope.hpp"

namespace riskrev::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Runs the command line `args` (program name excluded) and returns the exit
/// code. Results go to `out` unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Reads {"dim": d, "vertices": [[...], ...]}.
ConvexPolytope read_polytope_file(const std::string& path);

/// Formats a double the way every CSV cell is written.
std::string format_number(double v);

}  // namespace riskrev::cli
