#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "marketclear/error.hpp"
#include "marketclear/nested_logit.hpp"
#include "marketclear/sampler.hpp"

using namespace marketclear;

namespace {

constexpr std::size_t kMillion = 1000000;
const double kGumbelVariance = std::numbers::pi * std::numbers::pi / 6.0;

double laplace_estimate(double alpha, double t, std::uint64_t seed) {
  SeedStream stream(seed);
  double acc = 0.0;
  for (std::size_t s = 0; s < kMillion; ++s) acc += std::exp(-t * sample_positive_stable(alpha, stream));
  return acc / static_cast<double>(kMillion);
}

}  // namespace

TEST_CASE("uniform stream stays inside (0,1) and is reproducible") {
  SeedStream a(3), b(3), c(4), d(3, 1);
  bool differs_by_seed = false, differs_by_stream = false;
  for (int i = 0; i < 1000; ++i) {
    const double x = a.uniform_open();
    CHECK(x > 0.0);
    CHECK(x < 1.0);
    CHECK(x == b.uniform_open());
    differs_by_seed |= x != c.uniform_open();
    differs_by_stream |= x != d.uniform_open();
  }
  CHECK(differs_by_seed);
  CHECK(differs_by_stream);
}

TEST_CASE("standard gumbel moments") {
  SeedStream stream(1);
  double sum = 0.0, sq = 0.0;
  for (std::size_t s = 0; s < kMillion; ++s) {
    const double g = sample_standard_gumbel(stream);
    sum += g;
    sq += g * g;
  }
  const double m = static_cast<double>(kMillion);
  const double mean = sum / m;
  const double var = (sq - m * mean * mean) / (m - 1.0);
  CHECK(std::abs(mean - 0.5772156649015329) <= 0.005);
  CHECK(std::abs(var - kGumbelVariance) <= 0.01);
}

TEST_CASE("gumbel regression pin for seed 42") {
  // -ln(-ln U) of the first open-interval uniform of SeedStream(42); pinned
  // after checking the inverse CDF against the moment tests above.
  SeedStream stream(42);
  SeedStream replay(42);
  const double u = replay.uniform_open();
  const double first = sample_standard_gumbel(stream);
  CHECK(first == -std::log(-std::log(u)));
  CHECK(first == doctest::Approx(1.2705960212383669).epsilon(1e-15));
}

TEST_CASE("positive stable Laplace transform") {
  CHECK(std::abs(laplace_estimate(0.5, 1.0, 10) - std::exp(-1.0)) <= 0.002);
  CHECK(std::abs(laplace_estimate(0.9, 4.0, 11) - std::exp(-std::pow(4.0, 0.9))) <= 0.002);
  CHECK(std::abs(laplace_estimate(0.3, 2.0, 12) - std::exp(-std::pow(2.0, 0.3))) <= 0.002);

  SUBCASE("alpha near 1 degenerates to a point mass at 1") {
    SeedStream stream(13);
    std::vector<double> draws(200001);
    for (double& x : draws) x = sample_positive_stable(0.999, stream);
    std::nth_element(draws.begin(), draws.begin() + 100000, draws.end());
    CHECK(std::abs(draws[100000] - 1.0) <= 0.05);
  }

  SeedStream stream(0);
  for (double alpha : {0.0, 1.0, -0.5, 1.5}) CHECK_THROWS_AS(sample_positive_stable(alpha, stream), Error);
}

TEST_CASE("nested error draws reproduce the nested logit") {
  SUBCASE("single multinomial nest is symmetric") {
    const auto ns = NestStructure::single(3);
    const auto freq = monte_carlo_choice_frequencies(ns, std::vector<double>{0, 0, 0}, kMillion, 3);
    for (double f : freq) CHECK(std::abs(f - 1.0 / 3.0) <= 0.005);
  }
  SUBCASE("pair + singleton matches the closed form") {
    const NestStructure ns(3, {{0, 1}, {2}}, {0.5, 1.0});
    const std::vector<double> v{1.0, 0.0, 0.5};
    const auto freq = monte_carlo_choice_frequencies(ns, v, kMillion, 4);
    const auto exact = choice_probabilities(ns, v);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(freq[i] - exact[i]) <= 0.005);
    // Same instance, binomial 3-sigma band.
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(std::abs(freq[i] - exact[i]) <= 3.0 * std::sqrt(exact[i] * (1 - exact[i]) / 1e6));
    }
  }
  SUBCASE("marginals are standard gumbel") {
    const NestStructure ns(4, {{0, 1, 2}, {3}}, {0.3, 1.0});
    const auto mom = empirical_error_moments(ns, kMillion, 5);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(std::abs(mom.variance[i] - kGumbelVariance) <= 0.02);
      CHECK(std::abs(mom.mean[i] - 0.5772156649015329) <= 0.01);
    }
  }
}

TEST_CASE("monte carlo choice frequencies") {
  SUBCASE("dominant alternative") {
    std::vector<double> v(4, 0.0);
    v[0] = 40.0;
    const auto freq = monte_carlo_choice_frequencies(NestStructure::single(4), v, 10000, 6);
    CHECK(freq[0] >= 0.999);
  }
  SUBCASE("symmetric two-nest instance") {
    const NestStructure ns(4, {{0, 1}, {2, 3}}, {0.5, 0.5});
    const std::size_t samples = 200000;
    const auto freq = monte_carlo_choice_frequencies(ns, std::vector<double>(4, 0.0), samples, 7);
    const double band = 3.0 * std::sqrt(0.25 * 0.75 / static_cast<double>(samples));
    for (double f : freq) CHECK(std::abs(f - 0.25) <= band);
  }
  SUBCASE("conservative binomial consistency bound") {
    const NestStructure ns(5, {{0, 3}, {1, 2, 4}}, {0.25, 0.6});
    const std::vector<double> v{0.3, -0.4, 1.1, 0.0, -1.0};
    for (std::size_t samples : {1000u, 20000u, 300000u}) {
      const auto freq = monte_carlo_choice_frequencies(ns, v, samples, 8);
      const auto exact = choice_probabilities(ns, v);
      for (std::size_t i = 0; i < 5; ++i) {
        CHECK(std::abs(freq[i] - exact[i]) <= 4.0 * std::sqrt(0.25 / static_cast<double>(samples)));
      }
    }
  }
  SUBCASE("determinism") {
    const NestStructure ns(3, {{0, 1}, {2}}, {0.4, 1.0});
    const std::vector<double> v{0.1, 0.2, 0.3};
    CHECK(monte_carlo_choice_frequencies(ns, v, 50000, 9) == monte_carlo_choice_frequencies(ns, v, 50000, 9));
    CHECK(monte_carlo_choice_frequencies(ns, v, 50000, 9) != monte_carlo_choice_frequencies(ns, v, 50000, 10));
  }
  CHECK_THROWS_AS(monte_carlo_choice_frequencies(NestStructure::single(2), std::vector<double>{0, 0}, 0, 1),
                  Error);
}

TEST_CASE("error correlation structure") {
  SUBCASE("single multinomial nest is uncorrelated") {
    const auto corr = empirical_error_correlation(NestStructure::single(3), kMillion, 20);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        if (i != j) CHECK(std::abs(corr(i, j)) <= 0.01);
      }
    }
  }
  SUBCASE("within nest 1 - mu^2, across nests 0") {
    const NestStructure ns(5, {{0, 1, 2}, {3, 4}}, {0.5, 0.8});
    const auto corr = empirical_error_correlation(ns, kMillion, 21);
    CHECK(std::abs(corr(0, 1) - 0.75) <= 0.02);
    CHECK(std::abs(corr(0, 2) - 0.75) <= 0.02);
    CHECK(std::abs(corr(1, 2) - 0.75) <= 0.02);
    CHECK(std::abs(corr(3, 4) - 0.36) <= 0.02);
    for (std::size_t i : {0, 1, 2}) {
      for (std::size_t j : {3, 4}) CHECK(std::abs(corr(i, j)) <= 0.01);
    }
  }
  CHECK_THROWS_AS(empirical_error_correlation(NestStructure::single(2), 1, 0), Error);
}
