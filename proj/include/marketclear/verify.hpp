#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "marketclear/market.hpp"

namespace marketclear {

/// One line of a verification report: `measured` compared against
/// `tolerance` with `relation` ("<=" or ">=").
struct Check {
  std::string suite;
  std::string name;
  double measured;
  std::string relation;
  double tolerance;
  bool pass;
};

struct VerifyOptions {
  std::size_t samples = 1000000;
  std::uint64_t seed = 0;
};

/// gradient, duality, smoothness, montecarlo, correlation, bounds.
std::span<const std::string_view> suite_names();
bool is_known_suite(std::string_view name);

/// Runs one suite, or every suite when name == "all" (suites run
/// concurrently; the report keeps suite order). Throws kDomain on an unknown
/// name.
std::vector<Check> run_verification(const Market& m, std::string_view suite,
                                    const VerifyOptions& options);

void print_report(std::ostream& out, std::span<const Check> checks);

}  // namespace marketclear
