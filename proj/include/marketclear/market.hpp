#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "marketclear/nested_logit.hpp"
#include "marketclear/supply.hpp"

namespace marketclear {

/// A population of identical consumers: count persons, observable utilities
/// a_j, nested logit errors. Deterministic utility at prices p is a_j - p.
struct ConsumerType {
  double count;
  std::vector<double> utilities;
  NestStructure nests;
};

class Market {
 public:
  Market(std::vector<ConsumerType> consumers, std::vector<Supplier> suppliers);

  std::size_t size() const noexcept { return n_; }
  std::span<const ConsumerType> consumers() const noexcept { return consumers_; }
  std::span<const Supplier> suppliers() const noexcept { return suppliers_; }
  double population() const noexcept { return population_; }

 private:
  std::size_t n_;
  std::vector<ConsumerType> consumers_;
  std::vector<Supplier> suppliers_;
  double population_;
};

/// TER value together with its gradient, the excess supply
/// z(p) = sum_k y_k(p) - sum_j N_j x_j(p).
struct Evaluation {
  double ter = 0.0;
  std::vector<double> excess;
};

double ter(const Market& m, std::span<const double> p);
std::vector<double> ter_gradient(const Market& m, std::span<const double> p);

/// Value and gradient in one pass. Contributions of consumer types and
/// suppliers are computed concurrently and summed in a fixed index order, so
/// the result is bitwise independent of the thread count.
Evaluation evaluate(const Market& m, std::span<const double> p);

/// sum_j N_j / beta_j + sum_k 1 / Gamma_k, the smoothness constant of TER
/// used for step sizes.
double smoothness_constant(const Market& m);

struct ProductivityReport {
  bool productive = false;
  // Filled when productive: one supply vector per supplier (upper corners) and
  // one simplex point shared by all consumer types.
  std::vector<std::vector<double>> supply_witness;
  std::vector<double> demand_witness;
};

/// Checks that some feasible supply strictly exceeds some aggregate expected
/// demand in every coordinate. With box capacities this holds iff every good
/// has positive total capacity H_i and sum_i H_i exceeds the population.
ProductivityReport productivity_check(const Market& m);

struct EquilibriumResidual {
  double min_excess;       // min_i z_i(p)
  double complementarity;  // <p, z(p)>
  double grad_norm;        // |p - [p - z(p)]_+|_2
};

EquilibriumResidual equilibrium_residual(const Market& m, std::span<const double> p);
EquilibriumResidual residual_from_excess(std::span<const double> p, std::span<const double> z);

namespace serial {

Evaluation evaluate(const Market& m, std::span<const double> p);

}  // namespace serial

namespace detail {

// Evaluation at any finite p (no nonnegativity check).
Evaluation evaluate_extended(const Market& m, std::span<const double> p);

}  // namespace detail

}  // namespace marketclear
