#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace marketclear {

/// Partition of alternatives {0..n-1} into nests, each with a scale parameter
/// mu in (kMinMu, 1]. Validated on construction; immutable afterwards.
class NestStructure {
 public:
  static constexpr double kMinMu = 1e-6;

  NestStructure(std::size_t n, std::vector<std::vector<std::size_t>> nests,
                std::vector<double> mu);

  /// One nest holding every alternative (multinomial logit when mu == 1).
  static NestStructure single(std::size_t n, double mu = 1.0);

  std::size_t size() const noexcept { return n_; }
  std::size_t nest_count() const noexcept { return nests_.size(); }
  std::span<const std::size_t> members(std::size_t nest) const { return nests_[nest]; }
  double mu(std::size_t nest) const { return mu_[nest]; }
  std::span<const double> mus() const noexcept { return mu_; }
  std::size_t nest_of(std::size_t alternative) const { return nest_of_[alternative]; }
  double min_mu() const noexcept { return min_mu_; }

 private:
  std::size_t n_;
  std::vector<std::vector<std::size_t>> nests_;
  std::vector<double> mu_;
  std::vector<std::size_t> nest_of_;
  double min_mu_;
};

/// Expected maximum utility ln sum_l (sum_{i in N_l} exp(v_i/mu_l))^mu_l,
/// evaluated through nested log-sum-exp.
double surplus(const NestStructure& ns, std::span<const double> v);

/// Nested logit choice probabilities (the gradient of surplus).
std::vector<double> choice_probabilities(const NestStructure& ns, std::span<const double> v);

/// Writes the probabilities into `out` and returns the surplus. `out` must have
/// ns.size() entries.
double surplus_and_probabilities(const NestStructure& ns, std::span<const double> v,
                                 std::span<double> out);

/// Generalized entropy E*(q) on the simplex; q_i == 0 contributes 0.
double conjugate(const NestStructure& ns, std::span<const double> q);

/// |E(v) + E*(grad E(v)) - <grad E(v), v>|, zero up to rounding.
double fenchel_gap(const NestStructure& ns, std::span<const double> v);

struct SmoothnessModuli {
  double smoothness;        // B = 1 / min mu, w.r.t. (l_inf, l_1)
  double convexity;         // beta = min mu, modulus of E* w.r.t. l_1
  double gnl_comparison;    // 2 / min mu - 1
};

SmoothnessModuli smoothness_modulus(const NestStructure& ns);

// Tolerance on |sum q - 1| accepted by conjugate().
inline constexpr double kSimplexTolerance = 1e-9;

}  // namespace marketclear
