#include <doctest.h>

#include <string>

#include <json.hpp>

#include "finsler/errors.hpp"
#include "finsler/metric.hpp"
#include "finsler/sampling.hpp"
#include "finsler/specio.hpp"
#include "helpers.hpp"

using namespace finsler;
using nlohmann::json;

namespace {

json berwald_moor_file() {
  return json::parse(R"({
    "schema_version": "1",
    "dimension": 4,
    "metrics": {
      "bm": {
        "kind": "mroot",
        "m": 4,
        "A": [ { "index": [1, 2, 3, 4],
                 "coeff": [ { "powers": [0, 0, 0, 0], "value": 1.0 } ] } ],
        "pseudo_finsler_ok": true
      }
    }
  })");
}

std::string thrown_message(const json& j) {
  try {
    specio::parse_spec_json(j);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("the Berwald-Moor spec file parses and evaluates like the builtin") {
  const specio::SpecFile file = specio::parse_spec_json(berwald_moor_file());
  CHECK(file.dimension == 4);
  const MetricSpec* spec = file.find("bm");
  REQUIRE(spec != nullptr);
  CHECK(spec->root_order() == 4);
  CHECK(spec->pseudo_finsler_ok());
  PointSampler sampler(71);
  const MetricSpec& reference = testutil::builtin("berwald-moor");
  for (int rep = 0; rep < 10; ++rep) {
    const EvalPoint pt = sampler.point(4, SampleBox{});
    if (!admissibility(reference, pt).ok) continue;
    CHECK(metric_value(*spec, pt) == doctest::Approx(metric_value(reference, pt)));
  }
}

TEST_CASE("strictness") {
  SUBCASE("asymmetric B is rejected with the field path") {
    json j = json::parse(R"({
      "schema_version": "1",
      "dimension": 2,
      "metrics": {
        "bad": {
          "kind": "generalized",
          "m": 2,
          "A": [ { "index": [1, 1], "coeff": [ { "powers": [0, 0], "value": 1.0 } ] },
                 { "index": [2, 2], "coeff": [ { "powers": [0, 0], "value": 1.0 } ] } ],
          "B": [
            [ [], [ { "powers": [0, 0], "value": 0.5 } ] ],
            [ [], [] ]
          ]
        }
      }
    })");
    const std::string msg = thrown_message(j);
    CHECK(msg.find("symmetric") != std::string::npos);
    CHECK(msg.find(".B[") != std::string::npos);
  }
  SUBCASE("m = 1 is rejected") {
    json j = berwald_moor_file();
    j["metrics"]["bm"]["m"] = 1;
    j["metrics"]["bm"]["A"][0]["index"] = {1};
    CHECK(thrown_message(j).find(".m") != std::string::npos);
  }
  SUBCASE("unknown fields are rejected with their path") {
    json j = berwald_moor_file();
    j["metrics"]["bm"]["extra"] = 1;
    const std::string msg = thrown_message(j);
    CHECK(msg.find("unknown field") != std::string::npos);
    CHECK(msg.find("extra") != std::string::npos);
  }
  SUBCASE("wrong schema version is rejected") {
    json j = berwald_moor_file();
    j["schema_version"] = "2";
    CHECK(thrown_message(j).find("schema_version") != std::string::npos);
  }
  SUBCASE("index entries outside 1..n are rejected") {
    json j = berwald_moor_file();
    j["metrics"]["bm"]["A"][0]["index"] = {1, 2, 3, 5};
    CHECK(thrown_message(j).find("index") != std::string::npos);
  }
  SUBCASE("rank-one symmetry violations are rejected") {
    json j = json::parse(R"({
      "schema_version": "1",
      "dimension": 2,
      "metrics": {
        "bad": {
          "kind": "generalized_rank1",
          "m": 2,
          "A": [ { "index": [1, 1], "coeff": [ { "powers": [0, 0], "value": 1.0 } ] },
                 { "index": [2, 2], "coeff": [ { "powers": [0, 0], "value": 1.0 } ] } ],
          "c": [ [ { "powers": [1, 0], "value": 1.0 } ], [] ],
          "d": [ [], [ { "powers": [0, 1], "value": 1.0 } ] ]
        }
      }
    })");
    CHECK(thrown_message(j).find("c_i d_j") != std::string::npos);
  }
  SUBCASE("kind-specific field mixing is rejected") {
    json j = berwald_moor_file();
    j["metrics"]["bm"]["B"] = json::array();
    CHECK(thrown_message(j).find(".B") != std::string::npos);
  }
}

TEST_CASE("round-trip property: generated spec files parse into valid metrics") {
  PointSampler sampler(72);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 2 + static_cast<int>(sampler.uniform(0, 2.999));
    const int m = 2 + static_cast<int>(sampler.uniform(0, 2.999));
    const int kind = static_cast<int>(sampler.uniform(0, 2.999));
    json metric;
    metric["m"] = m;
    json a_terms = json::array();
    for (int i = 1; i <= n; ++i) {
      json coeff = json::array();
      coeff.push_back({{"powers", std::vector<int>(n, 0)}, {"value", sampler.uniform(0.5, 2.0)}});
      std::vector<int> powers(n, 0);
      powers[(i - 1 + 1) % n] = 1;
      coeff.push_back({{"powers", powers}, {"value", sampler.uniform(-0.2, 0.2)}});
      a_terms.push_back({{"index", std::vector<int>(m, i)}, {"coeff", coeff}});
    }
    metric["A"] = a_terms;
    if (kind == 0) {
      metric["kind"] = "mroot";
    } else if (kind == 1) {
      metric["kind"] = "generalized";
      json b = json::array();
      std::vector<std::vector<double>> bv(n, std::vector<double>(n));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) bv[i][j] = bv[j][i] = sampler.uniform(-0.1, 0.1);
      for (int i = 0; i < n; ++i) {
        json row = json::array();
        for (int j = 0; j < n; ++j) {
          json coeff = json::array();
          coeff.push_back({{"powers", std::vector<int>(n, 0)}, {"value", bv[i][j]}});
          row.push_back(coeff);
        }
        b.push_back(row);
      }
      metric["B"] = b;
    } else {
      metric["kind"] = "generalized_rank1";
      const double phi = sampler.uniform(-1.0, 1.0);
      json c = json::array(), d = json::array();
      for (int i = 0; i < n; ++i) {
        const double di = sampler.uniform(-1.0, 1.0);
        json dc = json::array(), cc = json::array();
        dc.push_back({{"powers", std::vector<int>(n, 0)}, {"value", di}});
        cc.push_back({{"powers", std::vector<int>(n, 0)}, {"value", phi * di}});
        d.push_back(dc);
        c.push_back(cc);
      }
      metric["c"] = c;
      metric["d"] = d;
    }
    metric["pseudo_finsler_ok"] = true;
    json file = {{"schema_version", "1"}, {"dimension", n}, {"metrics", {{"gen", metric}}}};
    const specio::SpecFile parsed = specio::parse_spec_json(file);
    const MetricSpec* spec = parsed.find("gen");
    REQUIRE(spec != nullptr);
    CHECK(spec->dimension() == n);
    CHECK(spec->root_order() == m);
    // invariants: evaluation works on admissible points, B symmetric by construction
    for (int t = 0; t < 5; ++t) {
      const EvalPoint pt = sampler.point(n, SampleBox{});
      const Admissibility adm = admissibility(*spec, pt);
      if (adm.ok) CHECK(metric_value(*spec, pt) == doctest::Approx(std::sqrt(adm.f2_value)));
      if (spec->b())
        for (int i = 1; i <= n; ++i)
          for (int j = 1; j <= n; ++j)
            CHECK(spec->b()->entry(i, j) == spec->b()->entry(j, i));
    }
  }
}
