#include "marketclear/supply.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "marketclear/error.hpp"

namespace marketclear {

double BaseCost::operator()(std::span<const double> y) const {
  double total = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    total += c[i] * y[i];
    if (kind == BaseCostKind::kQuadratic) total += 0.5 * d[i] * y[i] * y[i];
  }
  return total;
}

namespace {

void require_finite(std::span<const double> xs, const char* what) {
  for (double x : xs) {
    if (!std::isfinite(x)) throw Error(ErrorCode::kDomain, std::string(what) + " has non-finite entry");
  }
}

}  // namespace

Supplier::Supplier(std::vector<double> y_nat, double gamma, std::vector<double> lo,
                   std::vector<double> hi, BaseCost base_cost)
    : y_nat_(std::move(y_nat)),
      gamma_(gamma),
      lo_(std::move(lo)),
      hi_(std::move(hi)),
      base_cost_(std::move(base_cost)) {
  const std::size_t n = y_nat_.size();
  if (n == 0) throw Error(ErrorCode::kStructure, "supplier has zero goods");
  if (lo_.size() != n || hi_.size() != n || base_cost_.c.size() != n) {
    throw Error(ErrorCode::kStructure, "supplier vectors disagree in length");
  }
  if (base_cost_.kind == BaseCostKind::kQuadratic && base_cost_.d.size() != n) {
    throw Error(ErrorCode::kStructure, "quadratic base cost needs d with one entry per good");
  }
  if (!(gamma_ > 0.0) || !std::isfinite(gamma_)) {
    throw Error(ErrorCode::kNonPositiveGamma, "gamma must be positive");
  }
  require_finite(y_nat_, "y_nat");
  require_finite(lo_, "capacity.lo");
  require_finite(hi_, "capacity.hi");
  require_finite(base_cost_.c, "base_cost.c");
  require_finite(base_cost_.d, "base_cost.d");
  for (std::size_t i = 0; i < n; ++i) {
    if (lo_[i] < 0.0) {
      throw Error(ErrorCode::kBoundsInverted, "capacity.lo[" + std::to_string(i) + "] is negative");
    }
    if (lo_[i] > hi_[i]) {
      throw Error(ErrorCode::kBoundsInverted, "lo > hi at good " + std::to_string(i));
    }
  }
  for (double d : base_cost_.d) {
    if (d < 0.0) throw Error(ErrorCode::kDomain, "quadratic base cost needs d >= 0");
  }
}

double Supplier::cost(std::span<const double> y) const {
  double adjust = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double dev = y[i] - y_nat_[i];
    adjust += dev * dev;
  }
  return base_cost_(y) + gamma_ * adjust;
}

namespace detail {

void best_response_into(const Supplier& s, std::span<const double> p, std::span<double> y) {
  const auto& base = s.base_cost();
  const double two_gamma = 2.0 * s.gamma();
  for (std::size_t i = 0; i < s.size(); ++i) {
    // Stationarity: p_i - c_i - d_i y_i - 2 gamma (y_i - y_nat_i) = 0.
    const double stationary =
        (p[i] - base.c[i] + two_gamma * s.natural_supply()[i]) / (base.curvature(i) + two_gamma);
    y[i] = std::clamp(stationary, s.lower()[i], s.upper()[i]);
  }
}

double profit_from_response(const Supplier& s, std::span<const double> p,
                            std::span<const double> y) {
  double revenue = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) revenue += p[i] * y[i];
  return revenue - s.cost(y);
}

}  // namespace detail

namespace {

void check_prices(const Supplier& s, std::span<const double> p) {
  if (p.size() != s.size()) throw Error(ErrorCode::kStructure, "price vector has wrong length");
  for (double x : p) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw Error(ErrorCode::kDomain, "prices must be finite and nonnegative");
    }
  }
}

}  // namespace

std::vector<double> best_response(const Supplier& s, std::span<const double> p) {
  check_prices(s, p);
  std::vector<double> y(s.size());
  detail::best_response_into(s, p, y);
  return y;
}

double profit(const Supplier& s, std::span<const double> p) {
  check_prices(s, p);
  std::vector<double> y(s.size());
  detail::best_response_into(s, p, y);
  return detail::profit_from_response(s, p, y);
}

}  // namespace marketclear
