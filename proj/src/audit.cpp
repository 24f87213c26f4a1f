#include "marketclear/audit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "marketclear/error.hpp"

namespace marketclear::audit {

namespace {

double inf_norm(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

double dist2_sq(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

std::size_t below(SeedStream& rng, std::size_t bound) {
  return static_cast<std::size_t>(rng.uniform_open() * static_cast<double>(bound));
}

// Interior simplex point; the random exponent spreads mass unevenly.
std::vector<double> random_interior_simplex(SeedStream& rng, std::size_t n) {
  const double power = 1.0 + 5.0 * rng.uniform_open();
  std::vector<double> q(n);
  for (double& x : q) x = std::pow(rng.uniform_open(), power) + 1e-12;
  const double total = std::accumulate(q.begin(), q.end(), 0.0);
  for (double& x : q) x /= total;
  return q;
}

}  // namespace

NestStructure random_nest_structure(SeedStream& rng, std::size_t max_goods, std::size_t max_nests,
                                    double mu_lo) {
  const std::size_t n = 2 + below(rng, max_goods - 1);
  const std::size_t nests = 1 + below(rng, std::min(max_nests, n));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[below(rng, i + 1)]);
  std::vector<std::vector<std::size_t>> members(nests);
  for (std::size_t k = 0; k < n; ++k) members[k < nests ? k : below(rng, nests)].push_back(order[k]);
  std::vector<double> mu(nests);
  for (double& m : mu) m = mu_lo + (1.0 - mu_lo) * rng.uniform_open();
  return NestStructure(n, std::move(members), std::move(mu));
}

std::vector<double> uniform_vector(SeedStream& rng, std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (double& x : v) x = lo + (hi - lo) * rng.uniform_open();
  return v;
}

double surplus_gradient_error(const NestStructure& ns, std::span<const double> v, double step) {
  const auto q = choice_probabilities(ns, v);
  std::vector<double> w(v.begin(), v.end());
  double err = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double keep = w[i];
    w[i] = keep + step;
    const double up = surplus(ns, w);
    w[i] = keep - step;
    const double down = surplus(ns, w);
    w[i] = keep;
    err = std::max(err, std::abs((up - down) / (2.0 * step) - q[i]));
  }
  return err / inf_norm(q);
}

double ter_gradient_error(const Market& m, std::span<const double> p, double step) {
  const auto z = ter_gradient(m, p);
  std::vector<double> w(p.begin(), p.end());
  double err = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double keep = w[i];
    w[i] = keep + step;
    const double up = ter(m, w);
    w[i] = keep - step;
    const double down = ter(m, w);
    w[i] = keep;
    err = std::max(err, std::abs((up - down) / (2.0 * step) - z[i]));
  }
  return err / std::max(inf_norm(z), 1e-300);
}

double profit_gradient_error(const Supplier& s, std::span<const double> p, double step) {
  const auto y = best_response(s, p);
  std::vector<double> w(p.begin(), p.end());
  double err = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double keep = w[i];
    w[i] = keep + step;
    const double up = profit(s, w);
    w[i] = keep - step;
    const double down = profit(s, w);
    w[i] = keep;
    err = std::max(err, std::abs((up - down) / (2.0 * step) - y[i]));
  }
  return err / std::max(inf_norm(y), 1e-300);
}

InequalityAudit audit_surplus_smoothness(const NestStructure& ns, std::size_t pairs,
                                         std::uint64_t seed) {
  SeedStream rng(seed, 11);
  const std::size_t n = ns.size();
  const double bound = smoothness_modulus(ns).smoothness;
  InequalityAudit out;
  std::vector<double> q(n), r(n), w(n);
  for (std::size_t t = 0; t < pairs; ++t) {
    auto v = uniform_vector(rng, n, -5.0, 5.0);
    if (t % 2 == 0) {
      w = uniform_vector(rng, n, -5.0, 5.0);
    } else {
      const double scale = std::pow(10.0, -1.0 - 3.0 * rng.uniform_open());
      for (std::size_t i = 0; i < n; ++i) w[i] = v[i] + scale * (2.0 * rng.uniform_open() - 1.0);
    }
    surplus_and_probabilities(ns, v, q);
    surplus_and_probabilities(ns, w, r);
    double lhs = 0.0, dist = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      lhs += std::abs(q[i] - r[i]);
      dist = std::max(dist, std::abs(v[i] - w[i]));
    }
    const double rhs = bound * dist;
    ++out.trials;
    if (rhs > 0.0) out.worst_ratio = std::max(out.worst_ratio, lhs / rhs);
    // Rounding slack: probabilities carry ~1e-16 absolute error each.
    if (lhs > rhs * (1.0 + 1e-12) + 1e-14) ++out.violations;
  }
  return out;
}

InequalityAudit audit_conjugate_convexity(const NestStructure& ns, std::size_t triples,
                                          std::uint64_t seed) {
  SeedStream rng(seed, 13);
  const std::size_t n = ns.size();
  const double beta = smoothness_modulus(ns).convexity;
  InequalityAudit out;
  std::vector<double> mix(n);
  for (std::size_t t = 0; t < triples; ++t) {
    const auto q = random_interior_simplex(rng, n);
    auto r = random_interior_simplex(rng, n);
    if (t % 2 == 1) {
      // Nearby pair: the inequality is tightest locally.
      const double s = std::pow(10.0, -1.0 - 3.0 * rng.uniform_open());
      for (std::size_t i = 0; i < n; ++i) r[i] = (1.0 - s) * q[i] + s * r[i];
    }
    const double lambda = rng.uniform_open();
    double l1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      mix[i] = lambda * q[i] + (1.0 - lambda) * r[i];
      l1 += std::abs(q[i] - r[i]);
    }
    const double eq = conjugate(ns, q);
    const double er = conjugate(ns, r);
    const double combo = lambda * eq + (1.0 - lambda) * er;
    const double penalty = 0.5 * beta * lambda * (1.0 - lambda) * l1 * l1;
    const double gain = combo - conjugate(ns, mix);
    ++out.trials;
    const double slack = 1e-12 * std::max(1.0, std::abs(lambda * eq) + std::abs((1.0 - lambda) * er));
    // Ratios from gains near the rounding floor carry no information.
    if (gain > 100.0 * slack) out.worst_ratio = std::max(out.worst_ratio, penalty / gain);
    if (penalty > gain + slack) ++out.violations;
  }
  return out;
}

InequalityAudit audit_ter_lipschitz(const Market& m, std::size_t pairs, std::uint64_t seed,
                                    double price_scale) {
  SeedStream rng(seed, 17);
  const std::size_t n = m.size();
  const double lip = smoothness_constant(m);
  InequalityAudit out;
  for (std::size_t t = 0; t < pairs; ++t) {
    const auto p = uniform_vector(rng, n, 0.0, price_scale);
    std::vector<double> r(n);
    if (t % 2 == 0) {
      r = uniform_vector(rng, n, 0.0, price_scale);
    } else {
      const double s = std::pow(10.0, -1.0 - 3.0 * rng.uniform_open());
      for (std::size_t i = 0; i < n; ++i) r[i] = std::max(0.0, p[i] + s * (2.0 * rng.uniform_open() - 1.0));
    }
    const auto zp = ter_gradient(m, p);
    const auto zr = ter_gradient(m, r);
    const double lhs = std::sqrt(dist2_sq(zp, zr));
    const double rhs = lip * std::sqrt(dist2_sq(p, r));
    ++out.trials;
    if (rhs > 0.0) out.worst_ratio = std::max(out.worst_ratio, lhs / rhs);
    if (lhs > rhs * (1.0 + 1e-12) + 1e-13) ++out.violations;
  }
  return out;
}

double max_fenchel_gap(const NestStructure& ns, std::size_t trials, std::uint64_t seed,
                       double radius) {
  SeedStream rng(seed, 19);
  double worst = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto v = uniform_vector(rng, ns.size(), -radius, radius);
    worst = std::max(worst, fenchel_gap(ns, v));
  }
  return worst;
}

namespace {

template <typename BoundFn>
BoundAudit audit_bound(const Trace& trace, double ter_star, BoundFn bound) {
  BoundAudit out;
  for (const auto& row : trace.rows) {
    const double gap = row.ter - ter_star;
    const double b = bound(static_cast<double>(row.iter));
    ++out.rows;
    if (b > 0.0) out.worst_ratio = std::max(out.worst_ratio, gap / b);
    if (gap > b) ++out.violations;
  }
  return out;
}

}  // namespace

BoundAudit audit_basic_bound(const Trace& trace, std::span<const double> p0,
                             std::span<const double> p_star, double ter_star, double h) {
  const double r2 = dist2_sq(p0, p_star);
  return audit_bound(trace, ter_star, [&](double t) { return r2 / (2.0 * t * h); });
}

BoundAudit audit_accelerated_bound(const Trace& trace, std::span<const double> p0,
                                   std::span<const double> p_star, double ter_star, double h) {
  const double r2 = dist2_sq(p0, p_star);
  return audit_bound(trace, ter_star, [&](double t) { return 2.0 * r2 / (h * (t + 1.0) * (t + 1.0)); });
}

Reference reference_solve(const Market& m) {
  SolverConfig cfg;
  cfg.scheme = Scheme::kAccelerated;
  cfg.tol = 1e-12;
  cfg.max_iters = 10 * SolverConfig{}.max_iters;
  const auto trace = solve(m, cfg);
  const auto eval = evaluate(m, trace.price);
  return {trace.price, eval.ter, residual_from_excess(trace.price, eval.excess).grad_norm};
}

}  // namespace marketclear::audit
