#include "marketclear/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "marketclear/error.hpp"
#include "marketclear/log.hpp"
#include "marketclear/market_spec.hpp"
#include "marketclear/solvers.hpp"
#include "marketclear/trace_io.hpp"
#include "marketclear/verify.hpp"

namespace marketclear::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  out << content;
  if (!out) throw Error(ErrorCode::kIo, "write to '" + path + "' failed");
}

Market load_market(const std::string& path) {
  try {
    return parse_market_spec(read_file(path));
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

// Initial price file: a JSON array of n nonnegative numbers.
std::vector<double> load_prices(const std::string& path) {
  const auto text = read_file(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kMalformedDocument, path + ": " + e.what());
  }
  if (!doc.is_array()) throw Error(ErrorCode::kMalformedDocument, path + ": expected a JSON array");
  std::vector<double> p;
  for (const auto& x : doc) {
    if (!x.is_number()) throw Error(ErrorCode::kMalformedDocument, path + ": expected numbers");
    p.push_back(x.get<double>());
  }
  return p;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

struct SolveArgs {
  std::string market;
  std::string scheme = "basic";
  std::optional<double> step;
  std::size_t max_iters = SolverConfig{}.max_iters;
  double tol = SolverConfig{}.tol;
  std::string trace;
  std::string p0;
};

int run_solve(const SolveArgs& a, std::ostream& out) {
  const Market m = load_market(a.market);
  SolverConfig cfg;
  cfg.scheme = a.scheme == "accelerated" ? Scheme::kAccelerated : Scheme::kBasic;
  cfg.step = a.step;
  cfg.max_iters = a.max_iters;
  cfg.tol = a.tol;
  if (!a.p0.empty()) cfg.p0 = load_prices(a.p0);
  log::info("solving " + a.market + " with the " + a.scheme + " scheme, L = " + fmt(smoothness_constant(m)));

  const Trace trace = solve(m, cfg);
  if (!a.trace.empty()) {
    std::ostringstream buf;
    write_trace(buf, trace);
    write_file(a.trace, buf.str());
  }
  const auto eval = evaluate(m, trace.price);
  const auto res = residual_from_excess(trace.price, eval.excess);
  out << (trace.converged ? "converged" : "not converged") << " iterations=" << trace.rows.size()
      << " residual=" << fmt(res.grad_norm) << " min_excess=" << fmt(res.min_excess)
      << " complementarity=" << fmt(res.complementarity) << " ter=" << fmt(eval.ter) << '\n';
  out << "price =";
  for (double p : trace.price) out << ' ' << fmt(p);
  out << '\n';
  return trace.converged ? kExitOk : kExitNotConverged;
}

struct VerifyArgs {
  std::string market;
  std::string suite = "all";
  std::size_t samples = VerifyOptions{}.samples;
  std::uint64_t seed = 0;
};

int run_verify(const VerifyArgs& a, std::ostream& out) {
  if (!is_known_suite(a.suite)) {
    throw Error(ErrorCode::kDomain, "unknown suite '" + a.suite +
                                        "' (expected gradient, duality, smoothness, montecarlo, "
                                        "correlation, bounds or all)");
  }
  const Market m = load_market(a.market);
  const auto checks = run_verification(m, a.suite, {a.samples, a.seed});
  print_report(out, checks);
  for (const auto& c : checks) {
    if (!c.pass) return kExitError;
  }
  return kExitOk;
}

struct GenArgs {
  GeneratorOptions options;
  std::string out;
};

int run_gen(const GenArgs& a, std::ostream& out) {
  const auto doc = write_market_spec(generate_market(a.options));
  if (a.out.empty()) {
    out << doc;
  } else {
    write_file(a.out, doc);
  }
  return kExitOk;
}

struct RateArgs {
  std::string trace;
  double ter_star = 0.0;
};

int run_rate(const RateArgs& a, std::ostream& out) {
  std::istringstream in(read_file(a.trace));
  Trace trace;
  try {
    trace = read_trace(in);
  } catch (const Error& e) {
    throw Error(e.code(), a.trace + ": " + e.what());
  }
  const auto fit = fit_rate(trace, a.ter_star);
  out << "slope=" << fmt(fit.slope) << " window=[" << fit.first_iter << ", " << fit.last_iter
      << "] points=" << fit.points << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Market-clearing prices by minimizing total expected revenue", "marketclear"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "Run a pricing scheme on a market spec");
  solve_cmd->add_option("--market", solve_args.market, "Market spec JSON")->required();
  solve_cmd->add_option("--scheme", solve_args.scheme, "basic | accelerated")
      ->check(CLI::IsMember({"basic", "accelerated"}));
  solve_cmd->add_option("--step", solve_args.step, "Step size h (at most 1/L)");
  solve_cmd->add_option("--max-iters", solve_args.max_iters, "Iteration cap");
  solve_cmd->add_option("--tol", solve_args.tol, "Natural-map residual tolerance");
  solve_cmd->add_option("--trace", solve_args.trace, "Write the per-iteration trace CSV here");
  solve_cmd->add_option("--p0", solve_args.p0, "Initial prices, JSON array");

  VerifyArgs verify_args;
  auto* verify_cmd = app.add_subcommand("verify", "Run numerical verification suites");
  verify_cmd->add_option("--market", verify_args.market, "Market spec JSON")->required();
  verify_cmd->add_option("--suite", verify_args.suite,
                         "gradient | duality | smoothness | montecarlo | correlation | bounds | all");
  verify_cmd->add_option("--samples", verify_args.samples, "Monte Carlo sample count");
  verify_cmd->add_option("--seed", verify_args.seed, "Random seed");

  GenArgs gen_args;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random productive market spec");
  gen_cmd->add_option("--n", gen_args.options.goods, "Number of goods")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--consumers", gen_args.options.consumer_types, "Consumer types J")
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("--suppliers", gen_args.options.suppliers, "Suppliers K")
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen_args.options.seed, "Random seed");
  gen_cmd->add_option("--out", gen_args.out, "Output file (default: stdout)");

  RateArgs rate_args;
  auto* rate_cmd = app.add_subcommand("rate", "Fit the log-log convergence slope of a trace");
  rate_cmd->add_option("--trace", rate_args.trace, "Trace CSV")->required();
  rate_cmd->add_option("--ter-star", rate_args.ter_star, "Reference optimal TER")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }

  try {
    if (solve_cmd->parsed()) return run_solve(solve_args, out);
    if (verify_cmd->parsed()) return run_verify(verify_args, out);
    if (gen_cmd->parsed()) return run_gen(gen_args, out);
    if (rate_cmd->parsed()) return run_rate(rate_args, out);
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace marketclear::cli
