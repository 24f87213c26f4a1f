#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "marketclear/market.hpp"
#include "marketclear/nested_logit.hpp"
#include "marketclear/sampler.hpp"
#include "marketclear/solvers.hpp"

// Numerical audits of the analytic properties the solver relies on. Each
// returns the worst measured quantity so callers can print it next to the
// threshold, plus a violation count where the property is an inequality.
namespace marketclear::audit {

inline constexpr double kFiniteDifferenceStep = 1e-5;

/// Random partition of 2..max_goods alternatives into 1..max_nests nests with
/// mu uniform in [mu_lo, 1].
NestStructure random_nest_structure(SeedStream& rng, std::size_t max_goods = 12,
                                    std::size_t max_nests = 4, double mu_lo = 0.1);

std::vector<double> uniform_vector(SeedStream& rng, std::size_t n, double lo, double hi);

/// |fd - q|_inf / |q|_inf with fd the central difference of surplus.
double surplus_gradient_error(const NestStructure& ns, std::span<const double> v,
                              double step = kFiniteDifferenceStep);

/// Same normwise error for the TER gradient (excess supply) at p >= step.
double ter_gradient_error(const Market& m, std::span<const double> p,
                          double step = kFiniteDifferenceStep);

/// Same normwise error for a supplier's profit against its best response.
double profit_gradient_error(const Supplier& s, std::span<const double> p,
                             double step = kFiniteDifferenceStep);

struct InequalityAudit {
  std::size_t trials = 0;
  std::size_t violations = 0;
  double worst_ratio = 0.0;  // max lhs / rhs over trials (<= 1 means no violation)
};

/// |grad E(v) - grad E(w)|_1 <= B |v - w|_inf with B = 1 / min mu. Half the
/// pairs are global (uniform in [-5,5]^n), half are local perturbations.
InequalityAudit audit_surplus_smoothness(const NestStructure& ns, std::size_t pairs,
                                         std::uint64_t seed);

/// Midpoint form of beta-strong convexity of E* w.r.t. |.|_1 at interior
/// simplex points. worst_ratio is penalty / gain, (beta/2) l (1-l) |q-r|_1^2 over
/// l E*(q) + (1-l) E*(r) - E*(mix), taken over triples whose gain clears rounding.
InequalityAudit audit_conjugate_convexity(const NestStructure& ns, std::size_t triples,
                                          std::uint64_t seed);

/// |z(p) - z(r)|_2 <= L |p - r|_2 with L = smoothness_constant(m), p, r in
/// [0, price_scale]^n.
InequalityAudit audit_ter_lipschitz(const Market& m, std::size_t pairs, std::uint64_t seed,
                                    double price_scale = 5.0);

/// Largest Fenchel gap over random v with |v|_inf <= radius.
double max_fenchel_gap(const NestStructure& ns, std::size_t trials, std::uint64_t seed,
                       double radius = 20.0);

struct BoundAudit {
  std::size_t rows = 0;
  std::size_t violations = 0;
  double worst_ratio = 0.0;  // max gap_t / bound_t
};

/// Basic scheme: TER(p_t) - ter_star <= |p0 - p*|^2 / (2 t h).
BoundAudit audit_basic_bound(const Trace& trace, std::span<const double> p0,
                             std::span<const double> p_star, double ter_star, double h);

/// Accelerated scheme: TER(p_t) - ter_star <= 2 |p0 - p*|^2 / (h (t + 1)^2).
BoundAudit audit_accelerated_bound(const Trace& trace, std::span<const double> p0,
                                   std::span<const double> p_star, double ter_star, double h);

struct Reference {
  std::vector<double> price;
  double ter;
  double residual;
};

/// High-accuracy optimum: accelerated scheme to residual 1e-12, ten times the
/// default iteration cap.
Reference reference_solve(const Market& m);

}  // namespace marketclear::audit
