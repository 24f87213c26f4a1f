#include "marketclear/market.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "marketclear/error.hpp"

namespace marketclear {

Market::Market(std::vector<ConsumerType> consumers, std::vector<Supplier> suppliers)
    : consumers_(std::move(consumers)), suppliers_(std::move(suppliers)), population_(0.0) {
  if (consumers_.empty()) throw Error(ErrorCode::kStructure, "market needs at least one consumer type");
  if (suppliers_.empty()) throw Error(ErrorCode::kStructure, "market needs at least one supplier");
  n_ = consumers_.front().nests.size();
  for (std::size_t j = 0; j < consumers_.size(); ++j) {
    const auto& c = consumers_[j];
    if (c.nests.size() != n_ || c.utilities.size() != n_) {
      throw Error(ErrorCode::kStructure, "consumer type " + std::to_string(j) + " has dimension " +
                                             std::to_string(c.utilities.size()) + ", market has " +
                                             std::to_string(n_));
    }
    if (!(c.count > 0.0) || !std::isfinite(c.count)) {
      throw Error(ErrorCode::kDomain, "consumer type " + std::to_string(j) + " needs count > 0");
    }
    for (double a : c.utilities) {
      if (!std::isfinite(a)) throw Error(ErrorCode::kDomain, "utilities must be finite");
    }
    population_ += c.count;
  }
  for (std::size_t k = 0; k < suppliers_.size(); ++k) {
    if (suppliers_[k].size() != n_) {
      throw Error(ErrorCode::kStructure, "supplier " + std::to_string(k) + " has dimension " +
                                             std::to_string(suppliers_[k].size()) +
                                             ", market has " + std::to_string(n_));
    }
  }
}

namespace {

void check_dimension(const Market& m, std::span<const double> p) {
  if (p.size() != m.size()) {
    throw Error(ErrorCode::kStructure, "price vector has " + std::to_string(p.size()) +
                                           " entries, market has " + std::to_string(m.size()));
  }
  for (double x : p) {
    if (!std::isfinite(x)) throw Error(ErrorCode::kDomain, "price vector has non-finite entry");
  }
}

void check_prices(const Market& m, std::span<const double> p) {
  check_dimension(m, p);
  for (double x : p) {
    if (x < 0.0) throw Error(ErrorCode::kDomain, "prices must be nonnegative");
  }
}

// Value and signed quantity vector of one market participant. Slot index
// k < K is supplier k (contributes +y_k); K + j is consumer type j
// (contributes -N_j x_j).
double contribution(const Market& m, std::size_t slot, std::span<const double> p,
                    std::span<double> quantity, std::span<double> scratch) {
  const std::size_t K = m.suppliers().size();
  if (slot < K) {
    const auto& s = m.suppliers()[slot];
    detail::best_response_into(s, p, quantity);
    return detail::profit_from_response(s, p, quantity);
  }
  const auto& c = m.consumers()[slot - K];
  for (std::size_t i = 0; i < p.size(); ++i) scratch[i] = c.utilities[i] - p[i];
  const double value = surplus_and_probabilities(c.nests, scratch, quantity);
  for (double& q : quantity) q *= -c.count;
  return c.count * value;
}

// Below this many (participants x goods) the parallel region costs more than
// it saves.
constexpr std::size_t kParallelWork = 4096;

Evaluation evaluate_parallel(const Market& m, std::span<const double> p) {
  const std::size_t n = m.size();
  const std::size_t slots = m.suppliers().size() + m.consumers().size();
  std::vector<double> values(slots);
  std::vector<double> quantities(slots * n);
  const auto count = static_cast<std::int64_t>(slots);
#pragma omp parallel if (slots * n >= kParallelWork)
  {
    std::vector<double> scratch(n);
#pragma omp for schedule(static)
    for (std::int64_t s = 0; s < count; ++s) {
      const auto slot = static_cast<std::size_t>(s);
      values[slot] = contribution(m, slot, p, std::span(quantities).subspan(slot * n, n), scratch);
    }
  }
  Evaluation out;
  out.excess.assign(n, 0.0);
  for (std::size_t slot = 0; slot < slots; ++slot) {
    out.ter += values[slot];
    for (std::size_t i = 0; i < n; ++i) out.excess[i] += quantities[slot * n + i];
  }
  return out;
}

}  // namespace

namespace serial {

Evaluation evaluate(const Market& m, std::span<const double> p) {
  check_prices(m, p);
  const std::size_t n = m.size();
  Evaluation out;
  out.excess.assign(n, 0.0);
  std::vector<double> y(n), v(n), x(n);
  for (const auto& s : m.suppliers()) {
    detail::best_response_into(s, p, y);
    out.ter += detail::profit_from_response(s, p, y);
    for (std::size_t i = 0; i < n; ++i) out.excess[i] += y[i];
  }
  for (const auto& c : m.consumers()) {
    for (std::size_t i = 0; i < n; ++i) v[i] = c.utilities[i] - p[i];
    out.ter += c.count * surplus_and_probabilities(c.nests, v, x);
    for (std::size_t i = 0; i < n; ++i) out.excess[i] += -c.count * x[i];
  }
  return out;
}

}  // namespace serial

namespace detail {

Evaluation evaluate_extended(const Market& m, std::span<const double> p) {
  check_dimension(m, p);
  return evaluate_parallel(m, p);
}

}  // namespace detail

Evaluation evaluate(const Market& m, std::span<const double> p) {
  check_prices(m, p);
  return evaluate_parallel(m, p);
}

double ter(const Market& m, std::span<const double> p) { return evaluate(m, p).ter; }

std::vector<double> ter_gradient(const Market& m, std::span<const double> p) {
  return evaluate(m, p).excess;
}

double smoothness_constant(const Market& m) {
  double lip = 0.0;
  for (const auto& c : m.consumers()) lip += c.count / c.nests.min_mu();
  for (const auto& s : m.suppliers()) lip += 1.0 / s.gamma();
  return lip;
}

ProductivityReport productivity_check(const Market& m) {
  const std::size_t n = m.size();
  std::vector<double> capacity(n, 0.0);
  for (const auto& s : m.suppliers()) {
    for (std::size_t i = 0; i < n; ++i) capacity[i] += s.upper()[i];
  }
  ProductivityReport report;
  double total = 0.0;
  for (double h : capacity) {
    if (!(h > 0.0)) return report;
    total += h;
  }
  if (!(total > m.population())) return report;
  report.productive = true;
  for (const auto& s : m.suppliers()) {
    report.supply_witness.emplace_back(s.upper().begin(), s.upper().end());
  }
  // q_i = H_i / sum H gives N q_i = H_i * N / sum H < H_i.
  report.demand_witness.resize(n);
  for (std::size_t i = 0; i < n; ++i) report.demand_witness[i] = capacity[i] / total;
  return report;
}

EquilibriumResidual residual_from_excess(std::span<const double> p, std::span<const double> z) {
  EquilibriumResidual r{z.empty() ? 0.0 : z[0], 0.0, 0.0};
  double sq = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    r.min_excess = std::min(r.min_excess, z[i]);
    r.complementarity += p[i] * z[i];
    const double step = p[i] - std::max(p[i] - z[i], 0.0);
    sq += step * step;
  }
  r.grad_norm = std::sqrt(sq);
  return r;
}

EquilibriumResidual equilibrium_residual(const Market& m, std::span<const double> p) {
  const auto eval = evaluate(m, p);
  return residual_from_excess(p, eval.excess);
}

}  // namespace marketclear
