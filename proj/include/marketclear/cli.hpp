#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace marketclear::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;          // bad flags, unreadable or invalid input
inline constexpr int kExitNotConverged = 2;   // solve hit --max-iters

/// Entry point for `marketclear <solve|verify|gen|rate> ...`. args excludes
/// the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace marketclear::cli
