#pragma once

#include <iosfwd>

#include "marketclear/solvers.hpp"

namespace marketclear {

inline constexpr const char* kTraceHeader = "iter,ter,grad_norm,min_excess,complementarity,step";

/// CSV trace: header, one row per iteration (17 significant digits), then a
/// footer line "# price = [p1, p2, ...]".
void write_trace(std::ostream& out, const Trace& trace);

/// Inverse of write_trace. `converged` is not stored in the file and is left
/// false. Throws kMalformedDocument naming the offending line.
Trace read_trace(std::istream& in);

}  // namespace marketclear
