#include "marketclear/nested_logit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "marketclear/error.hpp"

namespace marketclear {

NestStructure::NestStructure(std::size_t n, std::vector<std::vector<std::size_t>> nests,
                             std::vector<double> mu)
    : n_(n), nests_(std::move(nests)), mu_(std::move(mu)) {
  if (n_ == 0) throw Error(ErrorCode::kStructure, "nest structure needs at least one alternative");
  if (nests_.empty()) throw Error(ErrorCode::kStructure, "nest structure needs at least one nest");
  if (mu_.size() != nests_.size()) {
    throw Error(ErrorCode::kStructure, "got " + std::to_string(mu_.size()) + " mu values for " +
                                           std::to_string(nests_.size()) + " nests");
  }
  constexpr auto kUnassigned = std::numeric_limits<std::size_t>::max();
  nest_of_.assign(n_, kUnassigned);
  for (std::size_t l = 0; l < nests_.size(); ++l) {
    if (nests_[l].empty()) {
      throw Error(ErrorCode::kStructure, "nest " + std::to_string(l) + " is empty");
    }
    if (!(mu_[l] > kMinMu && mu_[l] <= 1.0)) {
      throw Error(ErrorCode::kMuOutOfRange,
                  "mu out of range (0,1] for nest " + std::to_string(l));
    }
    for (std::size_t i : nests_[l]) {
      if (i >= n_) {
        throw Error(ErrorCode::kStructure, "alternative index " + std::to_string(i) +
                                               " outside 0.." + std::to_string(n_ - 1));
      }
      if (nest_of_[i] != kUnassigned) {
        throw Error(ErrorCode::kNestsNotDisjoint,
                    "nests not disjoint: alternative " + std::to_string(i) +
                        " appears in nests " + std::to_string(nest_of_[i]) + " and " +
                        std::to_string(l));
      }
      nest_of_[i] = l;
    }
  }
  for (std::size_t i = 0; i < n_; ++i) {
    if (nest_of_[i] == kUnassigned) {
      throw Error(ErrorCode::kNestsNotCovering,
                  "nests do not cover alternative " + std::to_string(i));
    }
  }
  min_mu_ = *std::min_element(mu_.begin(), mu_.end());
}

NestStructure NestStructure::single(std::size_t n, double mu) {
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  return NestStructure(n, {std::move(all)}, {mu});
}

namespace {

void check_utilities(const NestStructure& ns, std::span<const double> v) {
  if (v.size() != ns.size()) {
    throw Error(ErrorCode::kStructure, "utility vector has " + std::to_string(v.size()) +
                                           " entries, nest structure has " +
                                           std::to_string(ns.size()));
  }
  for (double x : v) {
    if (!std::isfinite(x)) throw Error(ErrorCode::kDomain, "utility vector has non-finite entry");
  }
}

// Per-nest log of sum_{i in N_l} exp(v_i / mu_l).
double nest_log_sum(const NestStructure& ns, std::size_t l, std::span<const double> v) {
  const double mu = ns.mu(l);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i : ns.members(l)) top = std::max(top, v[i] / mu);
  double acc = 0.0;
  for (std::size_t i : ns.members(l)) acc += std::exp(v[i] / mu - top);
  return top + std::log(acc);
}

// Fills log_sum[l] and inclusive[l] = mu_l * log_sum[l]; returns the surplus.
double inclusive_values(const NestStructure& ns, std::span<const double> v,
                        std::vector<double>& log_sum, std::vector<double>& inclusive) {
  const std::size_t nests = ns.nest_count();
  log_sum.resize(nests);
  inclusive.resize(nests);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < nests; ++l) {
    log_sum[l] = nest_log_sum(ns, l, v);
    inclusive[l] = ns.mu(l) * log_sum[l];
    top = std::max(top, inclusive[l]);
  }
  double acc = 0.0;
  for (std::size_t l = 0; l < nests; ++l) acc += std::exp(inclusive[l] - top);
  return top + std::log(acc);
}

}  // namespace

double surplus(const NestStructure& ns, std::span<const double> v) {
  check_utilities(ns, v);
  std::vector<double> log_sum, inclusive;
  return inclusive_values(ns, v, log_sum, inclusive);
}

double surplus_and_probabilities(const NestStructure& ns, std::span<const double> v,
                                 std::span<double> out) {
  check_utilities(ns, v);
  if (out.size() != ns.size()) {
    throw Error(ErrorCode::kStructure, "probability buffer has wrong length");
  }
  std::vector<double> log_sum, inclusive;
  const double value = inclusive_values(ns, v, log_sum, inclusive);
  // P_i = P(nest) * P(i | nest), both factors formed in log space.
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const std::size_t l = ns.nest_of(i);
    out[i] = std::exp((inclusive[l] - value) + (v[i] / ns.mu(l) - log_sum[l]));
  }
  return value;
}

std::vector<double> choice_probabilities(const NestStructure& ns, std::span<const double> v) {
  std::vector<double> q(ns.size());
  surplus_and_probabilities(ns, v, q);
  return q;
}

namespace {

double x_log_x(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace

double conjugate(const NestStructure& ns, std::span<const double> q) {
  if (q.size() != ns.size()) {
    throw Error(ErrorCode::kStructure, "probability vector has wrong length");
  }
  double total = 0.0;
  for (double x : q) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw Error(ErrorCode::kDomain, "probability vector has a negative or non-finite entry");
    }
    total += x;
  }
  if (std::abs(total - 1.0) > kSimplexTolerance) {
    throw Error(ErrorCode::kDomain, "probability vector sums to " + std::to_string(total));
  }
  double value = 0.0;
  for (std::size_t l = 0; l < ns.nest_count(); ++l) {
    const double mu = ns.mu(l);
    double within = 0.0;
    double mass = 0.0;
    for (std::size_t i : ns.members(l)) {
      within += x_log_x(q[i]);
      mass += q[i];
    }
    value += mu * within + (1.0 - mu) * x_log_x(mass);
  }
  return value;
}

double fenchel_gap(const NestStructure& ns, std::span<const double> v) {
  std::vector<double> q(ns.size());
  const double value = surplus_and_probabilities(ns, v, q);
  double inner = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) inner += q[i] * v[i];
  return std::abs(value + conjugate(ns, q) - inner);
}

SmoothnessModuli smoothness_modulus(const NestStructure& ns) {
  const double beta = ns.min_mu();
  return {1.0 / beta, beta, 2.0 / beta - 1.0};
}

}  // namespace marketclear
