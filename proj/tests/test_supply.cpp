#include <cmath>
#include <vector>

#include "doctest.h"
#include "marketclear/audit.hpp"
#include "marketclear/error.hpp"
#include "marketclear/sampler.hpp"
#include "marketclear/supply.hpp"

using namespace marketclear;

namespace {

Supplier linear_supplier(std::vector<double> y_nat, double gamma, std::vector<double> c,
                         std::vector<double> hi) {
  std::vector<double> lo(y_nat.size(), 0.0);
  return Supplier(std::move(y_nat), gamma, std::move(lo), std::move(hi),
                  BaseCost{BaseCostKind::kLinear, std::move(c), {}});
}

// Golden-section maximization of the separable profit term of coordinate i
// over [lo_i, hi_i]; independent of the closed-form clip.
double golden_section_coordinate(const Supplier& s, double p, std::size_t i) {
  const auto& base = s.base_cost();
  auto objective = [&](double y) {
    const double dev = y - s.natural_supply()[i];
    return p * y - base.c[i] * y - 0.5 * base.curvature(i) * y * y - s.gamma() * dev * dev;
  };
  double a = s.lower()[i], b = s.upper()[i];
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - ratio * (b - a), x2 = a + ratio * (b - a);
  double f1 = objective(x1), f2 = objective(x2);
  for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + ratio * (b - a);
      f2 = objective(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - ratio * (b - a);
      f1 = objective(x1);
    }
  }
  return 0.5 * (a + b);
}

Supplier random_supplier(SeedStream& rng, std::size_t n) {
  std::vector<double> lo(n), hi(n), y_nat(n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = rng.uniform_open();
    hi[i] = lo[i] + 4.0 * rng.uniform_open();
    y_nat[i] = lo[i] + (hi[i] - lo[i]) * rng.uniform_open();
  }
  BaseCost base;
  base.c = audit::uniform_vector(rng, n, 0.0, 2.0);
  if (rng.uniform_open() < 0.5) {
    base.kind = BaseCostKind::kQuadratic;
    base.d = audit::uniform_vector(rng, n, 0.0, 1.5);
  }
  return Supplier(std::move(y_nat), 0.2 + 2.0 * rng.uniform_open(), std::move(lo), std::move(hi),
                  std::move(base));
}

}  // namespace

TEST_CASE("best response examples") {
  {
    const auto s = linear_supplier({0.0, 0.0}, 0.5, {1.0, 1.0}, {10.0, 10.0});
    const auto y = best_response(s, std::vector<double>{3.0, 1.0});
    CHECK(y[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(y[1] == 0.0);
  }
  {
    const auto s = linear_supplier({1.5, 2.5}, 0.7, {0.4, 1.3}, {5.0, 5.0});
    const auto y = best_response(s, std::vector<double>{0.4, 1.3});
    CHECK(y[0] == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(y[1] == doctest::Approx(2.5).epsilon(1e-15));
  }
  {
    const Supplier s({1.0, 1.0}, 1.0, {0.0, 0.0}, {1.2, 1.2},
                     BaseCost{BaseCostKind::kQuadratic, {0.0, 0.0}, {1.0, 1.0}});
    const std::vector<double> p{10.0, 0.0};
    const auto y = best_response(s, p);
    // (d + 2 gamma) y = p + 2 gamma y_nat: y = (12/3, 2/3) clipped to 1.2.
    CHECK(y[0] == 1.2);
    CHECK(y[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    for (std::size_t i = 0; i < 2; ++i) CHECK(std::abs(y[i] - golden_section_coordinate(s, p[i], i)) <= 1e-9);
  }
  const auto s = linear_supplier({0.0}, 1.0, {0.0}, {1.0});
  CHECK_THROWS_AS(best_response(s, std::vector<double>{-0.1}), Error);
  CHECK_THROWS_AS(best_response(s, std::vector<double>{0.1, 0.2}), Error);
}

TEST_CASE("supplier validation") {
  CHECK_THROWS_AS(linear_supplier({0.0}, 0.0, {0.0}, {1.0}), Error);
  CHECK_THROWS_AS(linear_supplier({0.0}, -1.0, {0.0}, {1.0}), Error);
  try {
    Supplier({0.0}, 1.0, {2.0}, {1.0}, BaseCost{BaseCostKind::kLinear, {0.0}, {}});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kBoundsInverted);
  }
  CHECK_THROWS_AS(Supplier({0.0}, 1.0, {-1.0}, {1.0}, BaseCost{BaseCostKind::kLinear, {0.0}, {}}), Error);
  CHECK_THROWS_AS(Supplier({0.0}, 1.0, {0.0}, {1.0}, BaseCost{BaseCostKind::kQuadratic, {0.0}, {-1.0}}),
                  Error);
}

TEST_CASE("profit examples") {
  const auto s = linear_supplier({0.0, 0.0}, 0.8, {0.0, 0.0}, {3.0, 3.0});
  CHECK(profit(s, std::vector<double>{0.0, 0.0}) == 0.0);

  // Single good, y = p - 1 on [1, 11]: profit = (p - 1)^2 / 2.
  const auto single = linear_supplier({0.0}, 0.5, {1.0}, {10.0});
  CHECK(profit(single, std::vector<double>{3.0}) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(profit(single, std::vector<double>{0.5}) == 0.0);
}

TEST_CASE("random suppliers: envelope, feasibility, Lipschitz, convexity, monotonicity") {
  SeedStream rng(31);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform_open() * 6.0);
    const auto s = random_supplier(rng, n);
    const auto p = audit::uniform_vector(rng, n, 0.01, 6.0);
    const auto r = audit::uniform_vector(rng, n, 0.01, 6.0);
    CHECK(audit::profit_gradient_error(s, p) <= 1e-6);

    const auto y = best_response(s, p);
    const auto yr = best_response(s, r);
    double dy = 0.0, dp = 0.0, min_curv = 1e300;
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(y[i] >= s.lower()[i]);
      CHECK(y[i] <= s.upper()[i]);
      // Golden section on a smooth objective resolves the argmax only to
      // about sqrt(eps) times the box width.
      CHECK(std::abs(y[i] - golden_section_coordinate(s, p[i], i)) <= 2e-7);
      dy += (y[i] - yr[i]) * (y[i] - yr[i]);
      dp += (p[i] - r[i]) * (p[i] - r[i]);
      min_curv = std::min(min_curv, s.base_cost().curvature(i));
    }
    CHECK(std::sqrt(dy) <= std::sqrt(dp) / (min_curv + 2.0 * s.gamma()) + 1e-12);

    std::vector<double> mid(n);
    for (std::size_t i = 0; i < n; ++i) mid[i] = 0.5 * (p[i] + r[i]);
    CHECK(profit(s, mid) <= 0.5 * (profit(s, p) + profit(s, r)) + 1e-10);

    std::vector<double> higher = p;
    for (double& x : higher) x += rng.uniform_open();
    CHECK(profit(s, p) <= profit(s, higher));
  }
}
