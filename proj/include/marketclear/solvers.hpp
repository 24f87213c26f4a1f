#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "marketclear/market.hpp"

namespace marketclear {

enum class Scheme { kBasic, kAccelerated };

struct SolverConfig {
  Scheme scheme = Scheme::kBasic;
  std::optional<double> step;  // defaults to 1 / smoothness_constant
  std::size_t max_iters = 100000;
  double tol = 1e-8;
  std::vector<double> p0;      // empty means the zero vector
};

struct TraceRow {
  std::size_t iter;
  double ter;
  double grad_norm;
  double min_excess;
  double complementarity;
  double step;
};

/// Row t describes iterate p_t, t >= 1. The starting point is not recorded.
struct Trace {
  std::vector<TraceRow> rows;
  std::vector<double> price;  // final iterate
  bool converged = false;
};

/// [p - h z(p)]_+ for the market's excess supply z.
std::vector<double> step_basic(const Market& m, std::span<const double> p, double h);

/// Momentum sequence update (1 + sqrt(1 + 4 g^2)) / 2.
double gamma_next(double gamma);

/// Runs the selected pricing scheme until the natural-map residual drops to
/// cfg.tol or cfg.max_iters iterations have been taken.
///
/// Throws kNotProductive when the market fails the productivity check,
/// kStepTooLarge when cfg.step exceeds 1 / smoothness_constant(m), and
/// kDiverged when an iterate stops being finite.
Trace solve(const Market& m, const SolverConfig& cfg);

struct RateFit {
  double slope;
  std::size_t first_iter;
  std::size_t last_iter;
  std::size_t points;
};

/// Least-squares slope of ln(TER(p_t) - ter_star) against ln t over the rows
/// whose gap exceeds 10 eps |ter_star|. Needs at least 50 such rows.
RateFit fit_rate(std::span<const TraceRow> rows, double ter_star);
inline RateFit fit_rate(const Trace& trace, double ter_star) { return fit_rate(trace.rows, ter_star); }

}  // namespace marketclear
