#ifndef FINSLER_SPECIO_HPP
#define FINSLER_SPECIO_HPP

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "finsler/metric.hpp"

namespace finsler {
namespace specio {

struct SpecFile {
  std::string schema_version;
  int dimension = 0;
  std::vector<std::pair<std::string, MetricSpec>> metrics;

  const MetricSpec* find(const std::string& name) const;
};

/// Strict parse: unknown fields, asymmetric B entries, broken rank-one
/// symmetry, and dimension mismatches are rejected with the JSON path of the
/// offending field. Indices and powers are 1-based/x-ordered as documented.
SpecFile parse_spec(const std::string& path);
SpecFile parse_spec_json(const nlohmann::json& j);

}  // namespace specio
}  // namespace finsler

#endif
