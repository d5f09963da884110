#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "finsler/errors.hpp"
#include "finsler/run.hpp"

using namespace finsler;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& p) : path(p) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("check reports are deterministic for a fixed seed") {
  run::Options opts;
  opts.samples = 40;
  TempFile a("cli_report_a.json"), b("cli_report_b.json");
  std::ostringstream sink;
  opts.json_path = a.path;
  CHECK(run::cmd_check(opts, "dual-flat", {"dualflat-exp"}, sink) == run::kExitPass);
  opts.json_path = b.path;
  CHECK(run::cmd_check(opts, "dual-flat", {"dualflat-exp"}, sink) == run::kExitPass);
  CHECK(slurp(a.path) == slurp(b.path));
  // a different seed must change the sample (and so the report)
  opts.seed = 7;
  TempFile c("cli_report_c.json");
  opts.json_path = c.path;
  CHECK(run::cmd_check(opts, "dual-flat", {"dualflat-exp"}, sink) == run::kExitPass);
  CHECK(slurp(a.path) != slurp(c.path));
}

TEST_CASE("exit codes") {
  run::Options opts;
  opts.samples = 30;
  std::ostringstream sink;
  SUBCASE("pass / fail / inconclusive from dual-flat checks") {
    CHECK(run::cmd_check(opts, "dual-flat", {"euclidean"}, sink) == run::kExitPass);
    CHECK(run::cmd_check(opts, "dual-flat", {"dualflat-broken"}, sink) == run::kExitFail);
    run::Options neg = opts;
    neg.box.y_lo = -1.5;
    neg.box.y_hi = -0.5;
    CHECK(run::cmd_check(neg, "dual-flat", {"cubic"}, sink) == run::kExitInconclusive);
  }
  SUBCASE("usage errors throw InputError") {
    CHECK_THROWS_AS(run::cmd_check(opts, "dual-flat", {"no-such-metric"}, sink), InputError);
    CHECK_THROWS_AS(run::cmd_check(opts, "bogus", {"euclidean"}, sink), InputError);
    CHECK_THROWS_AS(run::cmd_check(opts, "projective", {"euclidean"}, sink), InputError);
  }
  SUBCASE("inadmissible eval points fail with the A value in the report") {
    TempFile report("cli_eval_report.json");
    opts.json_path = report.path;
    CHECK(run::cmd_eval(opts, "berwald-moor", {0, 0, 0, 0}, {0, 0, 0, 0}, sink) ==
          run::kExitFail);
    const std::string text = slurp(report.path);
    CHECK(text.find("inadmissible-point") != std::string::npos);
  }
}

TEST_CASE("eval reports the golden Berwald-Moor values") {
  run::Options opts;
  TempFile report("cli_eval_bm.json");
  opts.json_path = report.path;
  std::ostringstream sink;
  CHECK(run::cmd_eval(opts, "berwald-moor", {0, 0, 0, 0}, {1, 1, 1, 1}, sink) == run::kExitPass);
  const std::string text = slurp(report.path);
  CHECK(text.find("\"F\": 1.0") != std::string::npos);
  CHECK(text.find("-0.125") != std::string::npos);
}

TEST_CASE("eval on the Euclidean builtin reports the identity tensor") {
  run::Options opts;
  TempFile report("cli_eval_euclid.json");
  opts.json_path = report.path;
  std::ostringstream sink;
  CHECK(run::cmd_eval(opts, "euclidean", {0.2, -0.1, 0.0, 0.3}, {1, 0.5, 0.25, 1}, sink) ==
        run::kExitPass);
  const nlohmann::json j = nlohmann::json::parse(slurp(report.path));
  const auto& g = j["result"]["g"];
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k)
      CHECK(g[i][k].get<double>() == doctest::Approx(i == k ? 1.0 : 0.0));
  CHECK(j["result"]["positive_definite"].get<bool>());
}

TEST_CASE("geodesic traces are written as CSV with a JSON summary") {
  run::Options opts;
  TempFile csv("cli_trace.csv"), report("cli_trace.json");
  opts.json_path = report.path;
  std::ostringstream sink;
  CHECK(run::cmd_geodesic(opts, "euclidean", {0, 0, 0, 0}, {1, 0.5, 0.25, 1}, 0.1, 0.01,
                          csv.path, sink) == run::kExitPass);
  std::ifstream in(csv.path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,x1,x2,x3,x4,y1,y2,y3,y4,F");
  int rows = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 11);  // t = 0 plus 10 steps
  CHECK(slurp(report.path).find("energy_drift") != std::string::npos);
}

TEST_CASE("spec files integrate with metric resolution") {
  TempFile spec("cli_spec.json");
  {
    std::ofstream out(spec.path);
    out << R"({
      "schema_version": "1",
      "dimension": 2,
      "metrics": {
        "flat2": {
          "kind": "mroot",
          "m": 2,
          "A": [ { "index": [1, 1], "coeff": [ { "powers": [0, 0], "value": 1.0 } ] },
                 { "index": [2, 2], "coeff": [ { "powers": [0, 0], "value": 1.0 } ] } ]
        }
      }
    })";
  }
  run::Options opts;
  opts.spec_path = spec.path;
  opts.samples = 20;
  std::ostringstream sink;
  CHECK(run::cmd_check(opts, "dual-flat", {"flat2"}, sink) == run::kExitPass);
  // builtins still resolve when a spec file is loaded
  CHECK(run::cmd_check(opts, "dual-flat", {"euclidean"}, sink) == run::kExitPass);
}
