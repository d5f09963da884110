#ifndef FINSLER_TESTS_HELPERS_HPP
#define FINSLER_TESTS_HELPERS_HPP

#include <algorithm>
#include <vector>

#include <doctest.h>

#include "finsler/builtins.hpp"
#include "finsler/fields.hpp"
#include "finsler/metric.hpp"
#include "finsler/sampling.hpp"

namespace testutil {

using namespace finsler;

inline SymmetricTensorField berwald_moor_a() {
  SymmetricTensorField a(4, 4);
  a.add_term({1, 2, 3, 4}, Polynomial::constant(4, 1.0));
  return a;
}

inline SymmetricTensorField euclid_a(int n) {
  SymmetricTensorField a(n, 2);
  for (int i = 1; i <= n; ++i) a.add_term({i, i}, Polynomial::constant(n, 1.0));
  return a;
}

/// Random affine coefficient 1-ish + small linear x terms.
inline Polynomial random_affine(PointSampler& sampler, int n, double base, double spread) {
  Polynomial p = Polynomial::constant(n, base + sampler.uniform(-spread, spread));
  for (int axis = 1; axis <= n; ++axis)
    p += Polynomial::variable(n, axis) * sampler.uniform(-spread, spread);
  return p;
}

/// Random degree-m form, diagonal-dominant so that A > 0 and (A_ij) is
/// invertible on the positive y box.
inline SymmetricTensorField random_form(PointSampler& sampler, int n, int m,
                                        bool x_dependent = true) {
  SymmetricTensorField t(n, m);
  const double spread = x_dependent ? 0.2 : 0.0;
  for (int i = 1; i <= n; ++i)
    t.add_term(std::vector<int>(m, i), random_affine(sampler, n, 1.0, spread));
  // one mild off-diagonal term
  std::vector<int> mixed(m, 1);
  if (n >= 2) mixed[m - 1] = 2;
  t.add_term(mixed, random_affine(sampler, n, 0.05, spread * 0.2));
  return t;
}

inline const MetricSpec& builtin(const std::string& name) {
  const MetricSpec* spec = builtins::find(name);
  REQUIRE(spec != nullptr);
  return *spec;
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

}  // namespace testutil

#endif
