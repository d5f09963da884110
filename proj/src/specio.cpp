#include "finsler/specio.hpp"

#include <fstream>

#include "finsler/errors.hpp"

namespace finsler {
namespace specio {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw InputError("spec error at " + path + ": " + message);
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* a : allowed)
      if (it.key() == a) {
        known = true;
        break;
      }
    if (!known) fail(path + "." + it.key(), "unknown field");
  }
}

const json& require(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "missing required field");
  return *it;
}

int require_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<int>();
}

double require_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

Polynomial parse_coeff(const json& v, const std::string& path, int dimension) {
  if (!v.is_array()) fail(path, "expected a list of {powers, value} monomials");
  Polynomial p(dimension);
  int idx = 0;
  for (const json& mono : v) {
    const std::string mpath = path + "[" + std::to_string(idx++) + "]";
    if (!mono.is_object()) fail(mpath, "expected an object {powers, value}");
    reject_unknown(mono, mpath, {"powers", "value"});
    const json& powers = require(mono, mpath, "powers");
    if (!powers.is_array() || static_cast<int>(powers.size()) != dimension)
      fail(mpath + ".powers", "expected " + std::to_string(dimension) + " integer powers");
    std::vector<int> pw(dimension);
    for (int i = 0; i < dimension; ++i) {
      pw[i] = require_int(powers[i], mpath + ".powers[" + std::to_string(i) + "]");
      if (pw[i] < 0) fail(mpath + ".powers[" + std::to_string(i) + "]", "powers must be >= 0");
    }
    p.add_term(pw, require_number(require(mono, mpath, "value"), mpath + ".value"));
  }
  return p;
}

SymmetricTensorField parse_a(const json& v, const std::string& path, int dimension, int m) {
  if (!v.is_array()) fail(path, "expected a list of {index, coeff} terms");
  SymmetricTensorField t(dimension, m);
  int idx = 0;
  for (const json& term : v) {
    const std::string tpath = path + "[" + std::to_string(idx++) + "]";
    if (!term.is_object()) fail(tpath, "expected an object {index, coeff}");
    reject_unknown(term, tpath, {"index", "coeff"});
    const json& index = require(term, tpath, "index");
    if (!index.is_array() || static_cast<int>(index.size()) != m)
      fail(tpath + ".index", "expected a multi-index of length m = " + std::to_string(m));
    std::vector<int> mi(m);
    for (int i = 0; i < m; ++i) {
      mi[i] = require_int(index[i], tpath + ".index[" + std::to_string(i) + "]");
      if (mi[i] < 1 || mi[i] > dimension)
        fail(tpath + ".index[" + std::to_string(i) + "]",
             "index entries must lie in 1.." + std::to_string(dimension));
    }
    t.add_term(std::move(mi), parse_coeff(require(term, tpath, "coeff"), tpath + ".coeff",
                                          dimension));
  }
  return t;
}

QuadraticFormField parse_b(const json& v, const std::string& path, int dimension) {
  if (!v.is_array() || static_cast<int>(v.size()) != dimension)
    fail(path, "expected an " + std::to_string(dimension) + "x" + std::to_string(dimension) +
                   " array of coefficient lists");
  std::vector<std::vector<Polynomial>> rows(dimension);
  for (int i = 0; i < dimension; ++i) {
    const std::string rpath = path + "[" + std::to_string(i) + "]";
    if (!v[i].is_array() || static_cast<int>(v[i].size()) != dimension)
      fail(rpath, "expected a row of " + std::to_string(dimension) + " coefficient lists");
    for (int j = 0; j < dimension; ++j)
      rows[i].push_back(parse_coeff(v[i][j], rpath + "[" + std::to_string(j) + "]", dimension));
  }
  QuadraticFormField b(dimension);
  for (int i = 0; i < dimension; ++i)
    for (int j = i; j < dimension; ++j) {
      if (!(rows[i][j] == rows[j][i]))
        fail(path + "[" + std::to_string(j) + "][" + std::to_string(i) + "]",
             "B must be symmetric: entry differs from B[" + std::to_string(i) + "][" +
                 std::to_string(j) + "]");
      b.set_entry(i + 1, j + 1, rows[i][j]);
    }
  return b;
}

std::vector<Polynomial> parse_covector(const json& v, const std::string& path, int dimension) {
  if (!v.is_array() || static_cast<int>(v.size()) != dimension)
    fail(path, "expected " + std::to_string(dimension) + " coefficient lists");
  std::vector<Polynomial> out;
  for (int i = 0; i < dimension; ++i)
    out.push_back(parse_coeff(v[i], path + "[" + std::to_string(i) + "]", dimension));
  return out;
}

MetricSpec parse_metric(const json& v, const std::string& path, int dimension) {
  if (!v.is_object()) fail(path, "expected a metric definition object");
  reject_unknown(v, path, {"kind", "m", "A", "B", "c", "d", "pseudo_finsler_ok"});
  const json& kind_v = require(v, path, "kind");
  if (!kind_v.is_string()) fail(path + ".kind", "expected a string");
  const std::string kind = kind_v.get<std::string>();
  const int m = require_int(require(v, path, "m"), path + ".m");
  if (m < 2) fail(path + ".m", "m must be >= 2");
  bool pseudo = false;
  if (auto it = v.find("pseudo_finsler_ok"); it != v.end()) {
    if (!it->is_boolean()) fail(path + ".pseudo_finsler_ok", "expected a boolean");
    pseudo = it->get<bool>();
  }
  SymmetricTensorField a = parse_a(require(v, path, "A"), path + ".A", dimension, m);

  if (kind == "mroot") {
    if (v.contains("B")) fail(path + ".B", "mroot metrics take no B");
    if (v.contains("c") || v.contains("d")) fail(path + ".c", "mroot metrics take no c/d");
    return MetricSpec::mroot(std::move(a), pseudo);
  }
  if (kind == "generalized") {
    if (v.contains("c") || v.contains("d"))
      fail(path + ".c", "generalized metrics take B, not c/d");
    QuadraticFormField b = parse_b(require(v, path, "B"), path + ".B", dimension);
    return MetricSpec::generalized(std::move(a), std::move(b), pseudo);
  }
  if (kind == "generalized_rank1") {
    if (v.contains("B")) fail(path + ".B", "rank-one metrics take c/d, not B");
    std::vector<Polynomial> c = parse_covector(require(v, path, "c"), path + ".c", dimension);
    std::vector<Polynomial> d = parse_covector(require(v, path, "d"), path + ".d", dimension);
    try {
      return MetricSpec::generalized_rank1(std::move(a), RankOneForm(std::move(c), std::move(d)),
                                           pseudo);
    } catch (const InputError& e) {
      fail(path + ".c", e.what());
    }
  }
  fail(path + ".kind", "unknown kind '" + kind + "' (expected mroot, generalized, or generalized_rank1)");
}

}  // namespace

const MetricSpec* SpecFile::find(const std::string& name) const {
  for (const auto& [n, spec] : metrics)
    if (n == name) return &spec;
  return nullptr;
}

SpecFile parse_spec_json(const nlohmann::json& j) {
  if (!j.is_object()) fail("$", "expected a top-level object");
  reject_unknown(j, "$", {"schema_version", "dimension", "metrics"});
  SpecFile out;
  const json& sv = require(j, "$", "schema_version");
  if (!sv.is_string() || sv.get<std::string>() != "1")
    fail("$.schema_version", "expected the string \"1\"");
  out.schema_version = "1";
  out.dimension = require_int(require(j, "$", "dimension"), "$.dimension");
  if (out.dimension < 1) fail("$.dimension", "dimension must be >= 1");
  const json& metrics = require(j, "$", "metrics");
  if (!metrics.is_object()) fail("$.metrics", "expected an object of named metrics");
  for (auto it = metrics.begin(); it != metrics.end(); ++it)
    out.metrics.emplace_back(it.key(),
                             parse_metric(it.value(), "$.metrics." + it.key(), out.dimension));
  return out;
}

SpecFile parse_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read spec file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InputError("spec file " + path + " is not valid JSON: " + e.what());
  }
  return parse_spec_json(j);
}

}  // namespace specio
}  // namespace finsler
