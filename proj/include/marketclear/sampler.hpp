#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "marketclear/nested_logit.hpp"

namespace marketclear {

/// Independent uniform stream keyed by (seed, stream id). The engine is
/// std::mt19937_64 seeded through splitmix64, so identical keys give
/// bit-identical streams on every conforming standard library.
class SeedStream {
 public:
  explicit SeedStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t next() { return engine_(); }

  /// Uniform on the open interval (0, 1); 53 random bits, never 0 or 1.
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Standard Gumbel (location 0, scale 1) via -ln(-ln U).
double sample_standard_gumbel(SeedStream& stream);

/// Positive alpha-stable variate with Laplace transform exp(-t^alpha),
/// Kanter's representation. alpha must lie in (0, 1).
double sample_positive_stable(double alpha, SeedStream& stream);

/// One exact draw of the nested logit error vector. Nests with mu < 1 share a
/// stable mixing variable S: eps_i = mu * (G_i + ln S).
void sample_nested_errors(const NestStructure& ns, SeedStream& stream, std::span<double> out);
std::vector<double> sample_nested_errors(const NestStructure& ns, SeedStream& stream);

struct SquareMatrix {
  std::size_t n = 0;
  std::vector<double> data;

  explicit SquareMatrix(std::size_t dim = 0) : n(dim), data(dim * dim, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return data[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * n + j]; }
};

struct ErrorMoments {
  std::vector<double> mean;
  std::vector<double> variance;
  SquareMatrix correlation;
};

// Samples are drawn in blocks of this many; block b owns SeedStream(seed, b).
// Results therefore do not depend on the thread count.
inline constexpr std::size_t kSampleBlock = 8192;

/// Empirical argmax frequencies of v + eps over `samples` draws. Exact floating
/// ties (measure zero) go to the lowest index.
std::vector<double> monte_carlo_choice_frequencies(const NestStructure& ns,
                                                   std::span<const double> v,
                                                   std::size_t samples, std::uint64_t seed);

/// Sample means, variances and Pearson correlations of the error vector.
ErrorMoments empirical_error_moments(const NestStructure& ns, std::size_t samples,
                                     std::uint64_t seed);

SquareMatrix empirical_error_correlation(const NestStructure& ns, std::size_t samples,
                                         std::uint64_t seed);

namespace serial {

// Single-threaded reference versions; bit-identical to the parallel ones.
std::vector<double> monte_carlo_choice_frequencies(const NestStructure& ns,
                                                   std::span<const double> v,
                                                   std::size_t samples, std::uint64_t seed);
ErrorMoments empirical_error_moments(const NestStructure& ns, std::size_t samples,
                                     std::uint64_t seed);

}  // namespace serial

}  // namespace marketclear
