#include "marketclear/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "marketclear/error.hpp"
#include "marketclear/log.hpp"

namespace marketclear {

namespace {

void project_step(std::span<const double> base, std::span<const double> z, double h,
                  std::span<double> out) {
  for (std::size_t i = 0; i < base.size(); ++i) out[i] = std::max(base[i] - h * z[i], 0.0);
}

bool all_finite(std::span<const double> xs) {
  return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

void check_finite(const Evaluation& e, std::span<const double> p, std::size_t iter) {
  if (!std::isfinite(e.ter) || !all_finite(e.excess) || !all_finite(p)) {
    throw Error(ErrorCode::kDiverged, "non-finite value at iteration " + std::to_string(iter));
  }
}

TraceRow make_row(std::size_t iter, const Evaluation& e, std::span<const double> p, double h) {
  const auto r = residual_from_excess(p, e.excess);
  return {iter, e.ter, r.grad_norm, r.min_excess, r.complementarity, h};
}

}  // namespace

std::vector<double> step_basic(const Market& m, std::span<const double> p, double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::kDomain, "step size must be positive");
  const auto z = ter_gradient(m, p);
  std::vector<double> next(p.size());
  project_step(p, z, h, next);
  return next;
}

double gamma_next(double gamma) { return (1.0 + std::sqrt(1.0 + 4.0 * gamma * gamma)) / 2.0; }

Trace solve(const Market& m, const SolverConfig& cfg) {
  const std::size_t n = m.size();
  if (!productivity_check(m).productive) {
    throw Error(ErrorCode::kNotProductive,
                "market fails the productivity check; TER may be unbounded below");
  }
  const double lip = smoothness_constant(m);
  const double h = cfg.step.value_or(1.0 / lip);
  if (!(h > 0.0)) throw Error(ErrorCode::kDomain, "step size must be positive");
  if (h > 1.0 / lip) {
    throw Error(ErrorCode::kStepTooLarge, "step " + std::to_string(h) +
                                              " exceeds 1/L = " + std::to_string(1.0 / lip) +
                                              " (smoothness constant L = " + std::to_string(lip) +
                                              ")");
  }
  if (!(cfg.tol >= 0.0)) throw Error(ErrorCode::kDomain, "tolerance must be nonnegative");

  std::vector<double> p = cfg.p0.empty() ? std::vector<double>(n, 0.0) : cfg.p0;
  if (p.size() != n) throw Error(ErrorCode::kStructure, "initial price has wrong length");
  for (double x : p) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw Error(ErrorCode::kDomain, "initial price must be finite and nonnegative");
    }
  }

  Trace trace;
  Evaluation at_p = evaluate(m, p);
  check_finite(at_p, p, 0);
  if (residual_from_excess(p, at_p.excess).grad_norm <= cfg.tol) {
    trace.price = std::move(p);
    trace.converged = true;
    return trace;
  }
  trace.rows.reserve(std::min<std::size_t>(cfg.max_iters, 1 << 16));

  std::vector<double> next(n);
  if (cfg.scheme == Scheme::kBasic) {
    for (std::size_t t = 1; t <= cfg.max_iters; ++t) {
      project_step(p, at_p.excess, h, next);
      std::swap(p, next);
      at_p = evaluate(m, p);
      check_finite(at_p, p, t);
      trace.rows.push_back(make_row(t, at_p, p, h));
      if (trace.rows.back().grad_norm <= cfg.tol) {
        trace.converged = true;
        break;
      }
    }
  } else {
    // Gradient step from the extrapolated point q; only p is projected, so q
    // may leave the orthant and is evaluated without a sign check.
    std::vector<double> q = p;
    Evaluation at_q = at_p;
    double gamma = 1.0;
    for (std::size_t t = 1; t <= cfg.max_iters; ++t) {
      project_step(q, at_q.excess, h, next);
      const double gamma_new = gamma_next(gamma);
      const double momentum = (gamma - 1.0) / gamma_new;
      for (std::size_t i = 0; i < n; ++i) q[i] = next[i] + momentum * (next[i] - p[i]);
      std::swap(p, next);
      gamma = gamma_new;
      at_p = evaluate(m, p);
      check_finite(at_p, p, t);
      trace.rows.push_back(make_row(t, at_p, p, h));
      if (trace.rows.back().grad_norm <= cfg.tol) {
        trace.converged = true;
        break;
      }
      at_q = momentum == 0.0 ? at_p : detail::evaluate_extended(m, q);
      check_finite(at_q, q, t);
    }
  }
  trace.price = std::move(p);
  log::debug("solve finished after " + std::to_string(trace.rows.size()) + " iterations");
  return trace;
}

RateFit fit_rate(std::span<const TraceRow> rows, double ter_star) {
  const double floor = 10.0 * std::numeric_limits<double>::epsilon() * std::abs(ter_star);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  RateFit fit{0.0, 0, 0, 0};
  for (const auto& row : rows) {
    const double gap = row.ter - ter_star;
    if (row.iter == 0 || !(gap > floor)) continue;
    const double x = std::log(static_cast<double>(row.iter));
    const double y = std::log(gap);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    if (fit.points == 0) fit.first_iter = row.iter;
    fit.last_iter = row.iter;
    ++fit.points;
  }
  if (fit.points < 50) {
    throw Error(ErrorCode::kInsufficientData,
                "rate fit needs 50 rows above the noise floor, got " + std::to_string(fit.points));
  }
  const double k = static_cast<double>(fit.points);
  fit.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  return fit;
}

}  // namespace marketclear
