#include "marketclear/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <exception>
#include <numbers>
#include <ostream>

#include "marketclear/audit.hpp"
#include "marketclear/error.hpp"
#include "marketclear/sampler.hpp"
#include "marketclear/solvers.hpp"

namespace marketclear {

namespace {

constexpr std::array<std::string_view, 6> kSuites = {"gradient",  "duality",     "smoothness",
                                                     "montecarlo", "correlation", "bounds"};

struct Report {
  std::string suite;
  std::vector<Check> checks;

  void at_most(std::string name, double measured, double tol) {
    checks.push_back({suite, std::move(name), measured, "<=", tol, measured <= tol});
  }
  void at_least(std::string name, double measured, double tol) {
    checks.push_back({suite, std::move(name), measured, ">=", tol, measured >= tol});
  }
};

std::string type_label(std::size_t j) { return "consumer " + std::to_string(j + 1); }

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) { return splitmix64(seed ^ splitmix64(salt)); }

Report gradient_suite(const Market& m, const VerifyOptions& opt) {
  Report r{"gradient", {}};
  SeedStream rng(opt.seed, 101);
  const std::size_t n = m.size();
  for (std::size_t j = 0; j < m.consumers().size(); ++j) {
    const auto& c = m.consumers()[j];
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      const auto v = audit::uniform_vector(rng, n, -5.0, 5.0);
      worst = std::max(worst, audit::surplus_gradient_error(c.nests, v));
    }
    worst = std::max(worst, audit::surplus_gradient_error(c.nests, c.utilities));
    r.at_most(type_label(j) + ": choice probabilities vs FD of surplus (rel)", worst, 1e-6);
  }
  for (std::size_t k = 0; k < m.suppliers().size(); ++k) {
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      const auto p = audit::uniform_vector(rng, n, 0.01, 5.0);
      worst = std::max(worst, audit::profit_gradient_error(m.suppliers()[k], p));
    }
    r.at_most("supplier " + std::to_string(k + 1) + ": best response vs FD of profit (rel)", worst,
              1e-6);
  }
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto p = audit::uniform_vector(rng, n, 0.01, 5.0);
    worst = std::max(worst, audit::ter_gradient_error(m, p));
  }
  r.at_most("market: excess supply vs FD of TER (rel)", worst, 1e-6);
  return r;
}

Report duality_suite(const Market& m, const VerifyOptions& opt) {
  Report r{"duality", {}};
  for (std::size_t j = 0; j < m.consumers().size(); ++j) {
    const auto& c = m.consumers()[j];
    double worst = audit::max_fenchel_gap(c.nests, 1000, mix(opt.seed, 200 + j));
    worst = std::max(worst, fenchel_gap(c.nests, c.utilities));
    r.at_most(type_label(j) + ": max Fenchel gap, |v|_inf <= 20", worst, 1e-9);
  }
  return r;
}

Report smoothness_suite(const Market& m, const VerifyOptions& opt) {
  Report r{"smoothness", {}};
  for (std::size_t j = 0; j < m.consumers().size(); ++j) {
    const auto& ns = m.consumers()[j].nests;
    const auto sm = audit::audit_surplus_smoothness(ns, 10000, mix(opt.seed, 300 + j));
    r.at_most(type_label(j) + ": |dq|_1 / (B |dv|_inf), worst of 1e4 pairs", sm.worst_ratio, 1.0);
    r.at_most(type_label(j) + ": surplus smoothness violations", static_cast<double>(sm.violations), 0.0);
    const auto sc = audit::audit_conjugate_convexity(ns, 10000, mix(opt.seed, 400 + j));
    r.at_most(type_label(j) + ": E* strong convexity violations (1e4 triples)",
              static_cast<double>(sc.violations), 0.0);
  }
  const auto lip = audit::audit_ter_lipschitz(m, 10000, mix(opt.seed, 500));
  r.at_most("market: |dz|_2 / (L |dp|_2), worst of 1e4 pairs", lip.worst_ratio, 1.0);
  r.at_most("market: TER Lipschitz violations", static_cast<double>(lip.violations), 0.0);
  return r;
}

Report montecarlo_suite(const Market& m, const VerifyOptions& opt) {
  Report r{"montecarlo", {}};
  const double tol = 4.0 * std::sqrt(0.25 / static_cast<double>(opt.samples));
  for (std::size_t j = 0; j < m.consumers().size(); ++j) {
    const auto& c = m.consumers()[j];
    const auto exact = choice_probabilities(c.nests, c.utilities);
    const auto freq = monte_carlo_choice_frequencies(c.nests, c.utilities, opt.samples, mix(opt.seed, 600 + j));
    double worst = 0.0;
    for (std::size_t i = 0; i < exact.size(); ++i) worst = std::max(worst, std::abs(freq[i] - exact[i]));
    r.at_most(type_label(j) + ": |MC frequency - closed form|_inf at p = 0", worst, tol);
  }
  return r;
}

Report correlation_suite(const Market& m, const VerifyOptions& opt) {
  Report r{"correlation", {}};
  const double root = std::sqrt(static_cast<double>(opt.samples));
  const double within_tol = std::max(0.02, 6.0 / root);
  const double cross_tol = std::max(0.01, 6.0 / root);
  const double var_tol = std::max(0.02, 20.0 / root);
  const double gumbel_var = std::numbers::pi * std::numbers::pi / 6.0;
  for (std::size_t j = 0; j < m.consumers().size(); ++j) {
    const auto& ns = m.consumers()[j].nests;
    const auto mom = empirical_error_moments(ns, opt.samples, mix(opt.seed, 700 + j));
    double within = 0.0, cross = 0.0, var = 0.0;
    bool has_within = false, has_cross = false;
    for (std::size_t a = 0; a < ns.size(); ++a) {
      var = std::max(var, std::abs(mom.variance[a] - gumbel_var));
      for (std::size_t b = a + 1; b < ns.size(); ++b) {
        if (ns.nest_of(a) == ns.nest_of(b)) {
          const double mu = ns.mu(ns.nest_of(a));
          within = std::max(within, std::abs(mom.correlation(a, b) - (1.0 - mu * mu)));
          has_within = true;
        } else {
          cross = std::max(cross, std::abs(mom.correlation(a, b)));
          has_cross = true;
        }
      }
    }
    if (has_within) r.at_most(type_label(j) + ": within-nest |corr - (1 - mu^2)|", within, within_tol);
    if (has_cross) r.at_most(type_label(j) + ": cross-nest |corr|", cross, cross_tol);
    r.at_most(type_label(j) + ": |Var(eps_i) - pi^2/6|", var, var_tol);
  }
  return r;
}

Report bounds_suite(const Market& m, const VerifyOptions&) {
  Report r{"bounds", {}};
  const bool productive = productivity_check(m).productive;
  r.at_least("productivity check (1 = pass)", productive ? 1.0 : 0.0, 1.0);
  if (!productive) return r;

  const auto ref = audit::reference_solve(m);
  r.at_most("reference solve residual", ref.residual, 1e-12);
  const double h = 1.0 / smoothness_constant(m);
  const std::vector<double> p0(m.size(), 0.0);

  SolverConfig cfg;
  cfg.scheme = Scheme::kBasic;
  const auto basic = solve(m, cfg);
  const auto basic_bound = audit::audit_basic_bound(basic, p0, ref.price, ref.ter, h);
  r.at_most("basic: worst gap / (|p0-p*|^2 / 2th)", basic_bound.worst_ratio, 1.0);
  std::size_t ascents = 0;
  for (std::size_t t = 1; t < basic.rows.size(); ++t) {
    if (basic.rows[t].ter > basic.rows[t - 1].ter + 1e-12) ++ascents;
  }
  r.at_most("basic: TER increases between iterates", static_cast<double>(ascents), 0.0);

  cfg.scheme = Scheme::kAccelerated;
  const auto accel = solve(m, cfg);
  const auto accel_bound = audit::audit_accelerated_bound(accel, p0, ref.price, ref.ter, h);
  r.at_most("accelerated: worst gap / (2|p0-p*|^2 / h(t+1)^2)", accel_bound.worst_ratio, 1.0);

  for (const auto* run : {&basic, &accel}) {
    const std::string tag = run == &basic ? "basic" : "accelerated";
    const auto res = equilibrium_residual(m, run->price);
    r.at_most(tag + ": natural-map residual", res.grad_norm, 1e-8);
    r.at_least(tag + ": min excess supply", res.min_excess, -1e-6);
    r.at_most(tag + ": |<p, z(p)>|", std::abs(res.complementarity), 1e-6);
    r.at_least(tag + ": converged (1 = yes)", run->converged ? 1.0 : 0.0, 1.0);
  }
  double diff = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) diff = std::max(diff, std::abs(basic.price[i] - accel.price[i]));
  r.at_most("|p_basic - p_accelerated|_inf", diff, 1e-6);
  return r;
}

Report run_one(const Market& m, std::string_view suite, const VerifyOptions& opt) {
  if (suite == "gradient") return gradient_suite(m, opt);
  if (suite == "duality") return duality_suite(m, opt);
  if (suite == "smoothness") return smoothness_suite(m, opt);
  if (suite == "montecarlo") return montecarlo_suite(m, opt);
  if (suite == "correlation") return correlation_suite(m, opt);
  if (suite == "bounds") return bounds_suite(m, opt);
  throw Error(ErrorCode::kDomain, "unknown suite '" + std::string(suite) + "'");
}

}  // namespace

std::span<const std::string_view> suite_names() { return kSuites; }

bool is_known_suite(std::string_view name) {
  return name == "all" || std::find(kSuites.begin(), kSuites.end(), name) != kSuites.end();
}

std::vector<Check> run_verification(const Market& m, std::string_view suite,
                                    const VerifyOptions& options) {
  if (!is_known_suite(suite)) throw Error(ErrorCode::kDomain, "unknown suite '" + std::string(suite) + "'");
  if (options.samples < 2) throw Error(ErrorCode::kDomain, "verification needs at least 2 samples");
  std::vector<Report> reports;
  if (suite == "all") {
    reports.resize(kSuites.size());
    std::vector<std::exception_ptr> failures(kSuites.size());
    // Suites are independent; the sampling suites parallelize internally too.
#pragma omp parallel for schedule(dynamic)
    for (std::size_t s = 0; s < kSuites.size(); ++s) {
      try {
        reports[s] = run_one(m, kSuites[s], options);
      } catch (...) {
        failures[s] = std::current_exception();
      }
    }
    for (const auto& f : failures) {
      if (f) std::rethrow_exception(f);
    }
  } else {
    reports.push_back(run_one(m, suite, options));
  }
  std::vector<Check> checks;
  for (auto& rep : reports) {
    for (auto& c : rep.checks) checks.push_back(std::move(c));
  }
  return checks;
}

void print_report(std::ostream& out, std::span<const Check> checks) {
  char line[256];
  std::size_t failed = 0;
  for (const auto& c : checks) {
    std::snprintf(line, sizeof line, "%-4s %-12s %-58s %13.6g %s %-11.6g\n", c.pass ? "PASS" : "FAIL",
                  c.suite.c_str(), c.name.c_str(), c.measured, c.relation.c_str(), c.tolerance);
    out << line;
    if (!c.pass) ++failed;
  }
  out << checks.size() - failed << "/" << checks.size() << " checks passed\n";
}

}  // namespace marketclear
