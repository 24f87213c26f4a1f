#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace marketclear {

enum class BaseCostKind { kLinear, kQuadratic };

/// Separable convex base cost sum_i c_i y_i (+ d_i y_i^2 / 2 when quadratic).
struct BaseCost {
  BaseCostKind kind = BaseCostKind::kLinear;
  std::vector<double> c;
  std::vector<double> d;  // empty for kLinear

  double operator()(std::span<const double> y) const;
  double curvature(std::size_t i) const { return kind == BaseCostKind::kQuadratic ? d[i] : 0.0; }
};

/// A quantity-rigid supplier: maximizes <p, y> - base(y) - gamma * |y - y_nat|^2
/// over the box lo <= y <= hi.
class Supplier {
 public:
  Supplier(std::vector<double> y_nat, double gamma, std::vector<double> lo,
           std::vector<double> hi, BaseCost base_cost);

  std::size_t size() const noexcept { return y_nat_.size(); }
  std::span<const double> natural_supply() const noexcept { return y_nat_; }
  double gamma() const noexcept { return gamma_; }
  std::span<const double> lower() const noexcept { return lo_; }
  std::span<const double> upper() const noexcept { return hi_; }
  const BaseCost& base_cost() const noexcept { return base_cost_; }

  /// Total cost base(y) + gamma * |y - y_nat|_2^2.
  double cost(std::span<const double> y) const;

 private:
  std::vector<double> y_nat_;
  double gamma_;
  std::vector<double> lo_;
  std::vector<double> hi_;
  BaseCost base_cost_;
};

/// Profit-maximizing supply at prices p >= 0 (componentwise clip of the
/// stationary point onto the box).
std::vector<double> best_response(const Supplier& s, std::span<const double> p);

/// Optimal profit pi(p) = <p, y(p)> - cost(y(p)); convex with gradient y(p).
double profit(const Supplier& s, std::span<const double> p);

namespace detail {

// No sign check on p. The formulas extend smoothly to negative prices, which
// the accelerated scheme needs at extrapolated points.
void best_response_into(const Supplier& s, std::span<const double> p, std::span<double> y);
double profit_from_response(const Supplier& s, std::span<const double> p,
                            std::span<const double> y);

}  // namespace detail

}  // namespace marketclear
