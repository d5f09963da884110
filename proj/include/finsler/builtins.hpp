#ifndef FINSLER_BUILTINS_HPP
#define FINSLER_BUILTINS_HPP

#include <string>
#include <vector>

#include "finsler/metric.hpp"

namespace finsler {
namespace builtins {

struct Builtin {
  std::string name;
  std::string description;
  MetricSpec spec;
};

/// The shipped example metrics; every acceptance-style check can run
/// against these without a user spec file.
const std::vector<Builtin>& all();

/// nullptr when the name is unknown.
const MetricSpec* find(const std::string& name);

}  // namespace builtins
}  // namespace finsler

#endif
