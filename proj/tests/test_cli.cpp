#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "marketclear/cli.hpp"
#include "marketclear/trace_io.hpp"

using namespace marketclear;
namespace fs = std::filesystem;

namespace {

const std::string kData = MARKETCLEAR_DATA_DIR;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "marketclear_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

void put(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::trunc);
  out << text;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream b;
  b << in.rdbuf();
  return b.str();
}

}  // namespace

TEST_CASE("solve on the single-good demo") {
  const auto trace_path = scratch("sg.csv");
  const auto r = run({"solve", "--market", kData + "/single_good.json", "--scheme", "basic",
                      "--tol", "1e-10", "--trace", trace_path.string()});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.rfind("converged iterations=", 0) == 0);
  std::ifstream in(trace_path);
  const auto tr = read_trace(in);
  REQUIRE(tr.price.size() == 1);
  CHECK(std::abs(tr.price[0] - 3.0) <= 1e-8);
}

TEST_CASE("iteration cap gives exit 2 and a short trace") {
  const auto trace_path = scratch("cap.csv");
  const auto r = run({"solve", "--market", kData + "/single_good.json", "--max-iters", "3",
                      "--trace", trace_path.string()});
  CHECK(r.code == cli::kExitNotConverged);
  CHECK(r.out.rfind("not converged iterations=3", 0) == 0);
  std::ifstream in(trace_path);
  CHECK(read_trace(in).rows.size() == 3);
}

TEST_CASE("oversized step is refused citing the smoothness constant") {
  const auto r = run({"solve", "--market", kData + "/single_good.json", "--step", "0.3"});
  CHECK(r.code == cli::kExitError);
  CHECK(r.err.find("smoothness constant L = 4") != std::string::npos);
}

TEST_CASE("p0 file is honoured") {
  const auto p0 = scratch("p0.json");
  put(p0, "[3]");
  const auto r = run({"solve", "--market", kData + "/single_good.json", "--scheme", "accelerated",
                      "--p0", p0.string()});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.rfind("converged iterations=0", 0) == 0);
  put(p0, "{}");
  CHECK(run({"solve", "--market", kData + "/single_good.json", "--p0", p0.string()}).code ==
        cli::kExitError);
}

TEST_CASE("malformed input exits 1 with a diagnostic") {
  CHECK(run({}).code == cli::kExitError);
  CHECK(run({"frobnicate"}).code == cli::kExitError);
  CHECK(run({"solve"}).code == cli::kExitError);
  CHECK(run({"solve", "--market", kData + "/single_good.json", "--scheme", "fast"}).code ==
        cli::kExitError);
  CHECK(run({"solve", "--market", kData + "/single_good.json", "--max-iters", "many"}).code ==
        cli::kExitError);

  const auto missing = run({"solve", "--market", kData + "/nope.json"});
  CHECK(missing.code == cli::kExitError);
  CHECK(missing.err.find("error [io]") == 0);

  const auto bad = scratch("bad.json");
  put(bad, R"({"n": 1, "consumers": [})");
  const auto broken = run({"solve", "--market", bad.string()});
  CHECK(broken.code == cli::kExitError);
  CHECK(broken.err.find("malformed") != std::string::npos);

  put(bad, R"({"n": 2, "consumers": [{"count": 1, "utilities": [0, 0],
    "nests": [{"members": [1, 2], "mu": 1.5}]}], "suppliers": []})");
  const auto mu = run({"verify", "--market", bad.string(), "--suite", "gradient"});
  CHECK(mu.code == cli::kExitError);
  CHECK(mu.err.find("mu out of range (0,1]") != std::string::npos);

  const auto trace = scratch("bad.csv");
  put(trace, "iter,ter\n1,2\n");
  CHECK(run({"rate", "--trace", trace.string(), "--ter-star", "0"}).code == cli::kExitError);
  CHECK(run({"rate", "--trace", scratch("absent.csv").string(), "--ter-star", "0"}).code ==
        cli::kExitError);
}

TEST_CASE("unknown suite exits 1") {
  const auto r = run({"verify", "--market", kData + "/two_nest.json", "--suite", "everything"});
  CHECK(r.code == cli::kExitError);
  CHECK(r.err.find("unknown suite") != std::string::npos);
}

TEST_CASE("verify gradient suite passes on the two-nest demo") {
  const auto r = run({"verify", "--market", kData + "/two_nest.json", "--suite", "gradient"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("PASS") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("rate on a synthetic power-law trace") {
  const auto path = scratch("power.csv");
  {
    std::ofstream out(path);
    out << kTraceHeader << '\n';
    for (int t = 1; t <= 300; ++t) out << t << ',' << (1.0 + 7.0 / t) << ",0,0,0,0.1\n";
    out << "# price = [1]\n";
  }
  const auto r = run({"rate", "--trace", path.string(), "--ter-star", "1"});
  CHECK(r.code == cli::kExitOk);
  const auto pos = r.out.find("slope=");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(r.out.substr(pos + 6)) == doctest::Approx(-1.0).epsilon(0.01));
  CHECK(r.out.find("window=[1, 300]") != std::string::npos);
}

TEST_CASE("gen is deterministic and matches the shipped demo") {
  const auto a = run({"gen", "--n", "6", "--consumers", "2", "--suppliers", "2", "--seed", "7"});
  const auto b = run({"gen", "--n", "6", "--consumers", "2", "--suppliers", "2", "--seed", "7"});
  CHECK(a.code == cli::kExitOk);
  CHECK(a.out == b.out);
  CHECK(a.out == slurp(kData + "/demo6.json"));
  CHECK(run({"gen", "--n", "0"}).code == cli::kExitError);

  const auto out = scratch("gen.json");
  CHECK(run({"gen", "--seed", "7", "--out", out.string()}).code == cli::kExitOk);
  CHECK(slurp(out) == a.out);
}
