#include "marketclear/sampler.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "marketclear/error.hpp"

namespace marketclear {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SeedStream::SeedStream(std::uint64_t seed, std::uint64_t stream_id)
    : engine_(splitmix64(splitmix64(seed) ^ splitmix64(stream_id + 0x632be59bd9b4e019ULL))) {}

double sample_standard_gumbel(SeedStream& stream) {
  return -std::log(-std::log(stream.uniform_open()));
}

namespace {

// ln S for S positive alpha-stable (Kanter): with U ~ U(0, pi), W ~ Exp(1),
// S = sin(aU) / sin(U)^(1/a) * (sin((1-a)U) / W)^((1-a)/a).
double log_positive_stable(double alpha, SeedStream& stream) {
  const double u = std::numbers::pi * stream.uniform_open();
  const double w = -std::log(stream.uniform_open());
  return std::log(std::sin(alpha * u)) - std::log(std::sin(u)) / alpha +
         (1.0 - alpha) / alpha * (std::log(std::sin((1.0 - alpha) * u)) - std::log(w));
}

void draw_errors(const NestStructure& ns, SeedStream& stream, std::span<double> out) {
  for (std::size_t l = 0; l < ns.nest_count(); ++l) {
    const double mu = ns.mu(l);
    if (mu == 1.0) {
      for (std::size_t i : ns.members(l)) out[i] = sample_standard_gumbel(stream);
    } else {
      const double shift = log_positive_stable(mu, stream);
      for (std::size_t i : ns.members(l)) out[i] = mu * (sample_standard_gumbel(stream) + shift);
    }
  }
}

std::size_t block_count(std::size_t samples) { return (samples + kSampleBlock - 1) / kSampleBlock; }

std::size_t block_length(std::size_t samples, std::size_t block) {
  const std::size_t begin = block * kSampleBlock;
  return std::min(kSampleBlock, samples - begin);
}

void check_frequency_args(const NestStructure& ns, std::span<const double> v, std::size_t samples) {
  if (samples < 1) throw Error(ErrorCode::kDomain, "need at least one sample");
  if (v.size() != ns.size()) throw Error(ErrorCode::kStructure, "utility vector has wrong length");
  for (double x : v) {
    if (!std::isfinite(x)) throw Error(ErrorCode::kDomain, "utility vector has non-finite entry");
  }
}

// Argmax counts for one block, accumulated into `counts`.
void count_block(const NestStructure& ns, std::span<const double> v, std::size_t length,
                 SeedStream& stream, std::span<double> scratch, std::span<std::uint64_t> counts) {
  const std::size_t n = ns.size();
  for (std::size_t s = 0; s < length; ++s) {
    draw_errors(ns, stream, scratch);
    std::size_t best = 0;
    double best_value = v[0] + scratch[0];
    for (std::size_t i = 1; i < n; ++i) {
      const double value = v[i] + scratch[i];
      if (value > best_value) {
        best_value = value;
        best = i;
      }
    }
    ++counts[best];
  }
}

// Raw first and second moments of one block: sums[i], cross[i*n+j] for j >= i.
struct MomentSums {
  std::vector<double> sums;
  std::vector<double> cross;

  explicit MomentSums(std::size_t n = 0) : sums(n, 0.0), cross(n * n, 0.0) {}

  void add(const MomentSums& other) {
    for (std::size_t i = 0; i < sums.size(); ++i) sums[i] += other.sums[i];
    for (std::size_t i = 0; i < cross.size(); ++i) cross[i] += other.cross[i];
  }
};

void moment_block(const NestStructure& ns, std::size_t length, SeedStream& stream,
                  std::span<double> scratch, MomentSums& acc) {
  const std::size_t n = ns.size();
  for (std::size_t s = 0; s < length; ++s) {
    draw_errors(ns, stream, scratch);
    for (std::size_t i = 0; i < n; ++i) {
      acc.sums[i] += scratch[i];
      for (std::size_t j = i; j < n; ++j) acc.cross[i * n + j] += scratch[i] * scratch[j];
    }
  }
}

ErrorMoments finish_moments(std::size_t n, std::size_t samples, const MomentSums& total) {
  ErrorMoments out;
  const double m = static_cast<double>(samples);
  out.mean.resize(n);
  out.variance.resize(n);
  out.correlation = SquareMatrix(n);
  for (std::size_t i = 0; i < n; ++i) out.mean[i] = total.sums[i] / m;
  SquareMatrix cov(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      // Unbiased sample covariance.
      const double c = (total.cross[i * n + j] - m * out.mean[i] * out.mean[j]) / (m - 1.0);
      cov(i, j) = c;
      cov(j, i) = c;
    }
  }
  for (std::size_t i = 0; i < n; ++i) out.variance[i] = cov(i, i);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out.correlation(i, j) = i == j ? 1.0 : cov(i, j) / std::sqrt(cov(i, i) * cov(j, j));
    }
  }
  return out;
}

std::vector<double> to_frequencies(std::span<const std::uint64_t> counts, std::size_t samples) {
  std::vector<double> q(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    q[i] = static_cast<double>(counts[i]) / static_cast<double>(samples);
  }
  return q;
}

}  // namespace

double sample_positive_stable(double alpha, SeedStream& stream) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::kDomain, "stable index must lie in (0,1), got " + std::to_string(alpha));
  }
  return std::exp(log_positive_stable(alpha, stream));
}

void sample_nested_errors(const NestStructure& ns, SeedStream& stream, std::span<double> out) {
  if (out.size() != ns.size()) throw Error(ErrorCode::kStructure, "error buffer has wrong length");
  draw_errors(ns, stream, out);
}

std::vector<double> sample_nested_errors(const NestStructure& ns, SeedStream& stream) {
  std::vector<double> eps(ns.size());
  draw_errors(ns, stream, eps);
  return eps;
}

std::vector<double> monte_carlo_choice_frequencies(const NestStructure& ns,
                                                   std::span<const double> v,
                                                   std::size_t samples, std::uint64_t seed) {
  check_frequency_args(ns, v, samples);
  const std::size_t n = ns.size();
  const auto blocks = static_cast<std::int64_t>(block_count(samples));
  std::vector<std::uint64_t> per_block(static_cast<std::size_t>(blocks) * n, 0);
#pragma omp parallel
  {
    std::vector<double> scratch(n);
#pragma omp for schedule(static)
    for (std::int64_t b = 0; b < blocks; ++b) {
      const auto block = static_cast<std::size_t>(b);
      SeedStream stream(seed, block);
      count_block(ns, v, block_length(samples, block), stream, scratch,
                  std::span(per_block).subspan(block * n, n));
    }
  }
  std::vector<std::uint64_t> counts(n, 0);
  for (std::size_t b = 0; b < static_cast<std::size_t>(blocks); ++b) {
    for (std::size_t i = 0; i < n; ++i) counts[i] += per_block[b * n + i];
  }
  return to_frequencies(counts, samples);
}

ErrorMoments empirical_error_moments(const NestStructure& ns, std::size_t samples,
                                     std::uint64_t seed) {
  if (samples < 2) throw Error(ErrorCode::kDomain, "need at least two samples");
  const std::size_t n = ns.size();
  const auto blocks = static_cast<std::int64_t>(block_count(samples));
  std::vector<MomentSums> partial(static_cast<std::size_t>(blocks), MomentSums(n));
#pragma omp parallel
  {
    std::vector<double> scratch(n);
#pragma omp for schedule(static)
    for (std::int64_t b = 0; b < blocks; ++b) {
      const auto block = static_cast<std::size_t>(b);
      SeedStream stream(seed, block);
      moment_block(ns, block_length(samples, block), stream, scratch, partial[block]);
    }
  }
  MomentSums total(n);
  for (const auto& p : partial) total.add(p);
  return finish_moments(n, samples, total);
}

SquareMatrix empirical_error_correlation(const NestStructure& ns, std::size_t samples,
                                         std::uint64_t seed) {
  return empirical_error_moments(ns, samples, seed).correlation;
}

namespace serial {

std::vector<double> monte_carlo_choice_frequencies(const NestStructure& ns,
                                                   std::span<const double> v,
                                                   std::size_t samples, std::uint64_t seed) {
  check_frequency_args(ns, v, samples);
  const std::size_t n = ns.size();
  std::vector<double> scratch(n);
  std::vector<std::uint64_t> counts(n, 0);
  for (std::size_t b = 0; b < block_count(samples); ++b) {
    SeedStream stream(seed, b);
    count_block(ns, v, block_length(samples, b), stream, scratch, counts);
  }
  return to_frequencies(counts, samples);
}

ErrorMoments empirical_error_moments(const NestStructure& ns, std::size_t samples,
                                     std::uint64_t seed) {
  if (samples < 2) throw Error(ErrorCode::kDomain, "need at least two samples");
  const std::size_t n = ns.size();
  std::vector<double> scratch(n);
  MomentSums total(n);
  for (std::size_t b = 0; b < block_count(samples); ++b) {
    SeedStream stream(seed, b);
    MomentSums block(n);
    moment_block(ns, block_length(samples, b), stream, scratch, block);
    total.add(block);
  }
  return finish_moments(n, samples, total);
}

}  // namespace serial

}  // namespace marketclear
