#include "finsler/builtins.hpp"

#include <cmath>

namespace finsler {
namespace builtins {

namespace {

Polynomial c0(int n, double v) { return Polynomial::constant(n, v); }

Polynomial affine(int n, double c, std::initializer_list<std::pair<int, double>> linear) {
  Polynomial p = Polynomial::constant(n, c);
  for (const auto& [axis, w] : linear) p += Polynomial::variable(n, axis) * w;
  return p;
}

/// A = a_ij(x) y^i y^j from a symmetric polynomial matrix (upper triangle).
SymmetricTensorField quadratic_a(int n, const std::vector<std::vector<Polynomial>>& a) {
  SymmetricTensorField t(n, 2);
  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= n; ++j) {
      const Polynomial& entry = a[i - 1][j - 1];
      if (entry.is_zero()) continue;
      t.add_term({i, j}, i == j ? entry : entry * 2.0);
    }
  return t;
}

std::vector<std::vector<Polynomial>> conformal_a_entries() {
  const int n = 3;
  std::vector<std::vector<Polynomial>> a(n, std::vector<Polynomial>(n, Polynomial(n)));
  a[0][0] = affine(n, 1.0, {{2, 0.1}});
  a[1][1] = affine(n, 1.0, {{3, 0.1}});
  a[2][2] = affine(n, 1.0, {{1, 0.1}});
  a[0][1] = affine(n, 0.0, {{1, 0.05}});
  a[1][2] = affine(n, 0.0, {{2, 0.05}});
  a[0][2] = Polynomial(n);
  return a;
}

SymmetricTensorField cubic_a() {
  const int n = 3;
  SymmetricTensorField t(n, 3);
  t.add_term({1, 1, 1}, affine(n, 1.0, {{2, 0.2}}));
  t.add_term({2, 2, 2}, affine(n, 1.0, {{3, 0.2}}));
  t.add_term({3, 3, 3}, affine(n, 1.0, {{1, 0.2}}));
  return t;
}

MetricSpec rank1_member(double s) {
  const int n = 3;
  const Vec d_const = {1.0, 0.5, 0.25};
  std::vector<Polynomial> c(n, Polynomial(n)), d(n, Polynomial(n));
  const Polynomial phi = affine(n, 1.0, {{1, 1.0}});
  for (int i = 0; i < n; ++i) {
    d[i] = c0(n, d_const[i]);
    if (s != 0.0) c[i] = phi * (s * d_const[i]);
  }
  return MetricSpec::generalized_rank1(cubic_a(), RankOneForm(std::move(c), std::move(d)),
                                       /*pseudo_finsler_ok=*/true);
}

std::vector<Builtin> make_all() {
  std::vector<Builtin> out;

  {
    const int n = 4;
    SymmetricTensorField a(n, 2);
    for (int i = 1; i <= n; ++i) a.add_term({i, i}, c0(n, 1.0));
    out.push_back({"euclidean", "m=2 identity metric, F = |y| (n=4)", MetricSpec::mroot(a)});
  }
  {
    const int n = 4;
    SymmetricTensorField a(n, 4);
    a.add_term({1, 2, 3, 4}, c0(n, 1.0));
    out.push_back({"berwald-moor", "quartic F = (y1 y2 y3 y4)^{1/4} (n=4, pseudo-Finsler)",
                   MetricSpec::mroot(a, /*pseudo_finsler_ok=*/true)});
    QuadraticFormField b(n);
    b.set_entry(1, 1, c0(n, 0.1));
    out.push_back({"berwald-moor-b",
                   "generalized quartic over the Berwald-Moor A with B = 0.1 (y1)^2",
                   MetricSpec::generalized(a, b, /*pseudo_finsler_ok=*/true)});
  }
  out.push_back({"cubic", "x-dependent diagonal cubic, A = sum (1 + 0.2 x_s)(y^i)^3 (n=3)",
                 MetricSpec::mroot(cubic_a(), /*pseudo_finsler_ok=*/true)});
  {
    const int n = 3;
    SymmetricTensorField a(n, 2);
    for (int i = 1; i <= n; ++i) a.add_term({i, i}, c0(n, 1.0));
    QuadraticFormField b(n);
    b.set_entry(1, 1, affine(n, 0.0, {{2, 0.1}}));
    b.set_entry(2, 2, affine(n, 0.0, {{1, 0.1}}));
    b.set_entry(3, 3, Polynomial::variable(n, 1) * Polynomial::variable(n, 2) * 0.1);
    b.set_entry(1, 2, affine(n, 0.0, {{3, 0.05}}));
    b.set_entry(1, 3, affine(n, 0.0, {{2, 0.05}}));
    out.push_back({"riemann-poly",
                   "Riemannian m=2 metric with polynomial x-dependence, F^2 = |y|^2 + b_ij(x) y^i y^j (n=3)",
                   MetricSpec::generalized(a, b)});
  }
  {
    const int n = 3;
    const auto a = conformal_a_entries();
    out.push_back({"conformal-root", "m=2 root metric of the conformal pair, F = (a_ij(x) y^i y^j)^{1/2}",
                   MetricSpec::mroot(quadratic_a(n, a))});
    QuadraticFormField b(n);
    const double scale = std::expm1(0.5);  // e^{2 alpha0} - 1 with alpha0 = 0.25
    for (int i = 1; i <= n; ++i)
      for (int j = i; j <= n; ++j)
        if (!a[i - 1][j - 1].is_zero()) b.set_entry(i, j, a[i - 1][j - 1] * scale);
    out.push_back({"conformal-scaled",
                   "generalized metric conformal to conformal-root with constant alpha = 0.25",
                   MetricSpec::generalized(quadratic_a(n, a), b)});
  }
  {
    const int n = 3;
    const Vec c = {1.0, 0.7, 0.4};
    const Polynomial f = affine(n, 1.0, {{1, c[0]}, {2, c[1]}, {3, c[2]}});
    SymmetricTensorField a = power_of_linear_form(n, 3, c, f);
    QuadraticFormField b(n);
    for (int i = 1; i <= n; ++i) b.set_entry(i, i, c0(n, 1.0));
    out.push_back({"dualflat-exp",
                   "locally dually flat family A = (1 + c.x)(c.y)^3, B = |y|^2 (n=3, m=3)",
                   MetricSpec::generalized(a, b)});
  }
  {
    const int n = 3;
    SymmetricTensorField a(n, 2);
    for (int i = 1; i <= n; ++i) a.add_term({i, i}, c0(n, 1.0));
    QuadraticFormField b(n);
    b.set_entry(1, 1, Polynomial::variable(n, 2));
    out.push_back({"dualflat-broken",
                   "not dually flat: F^2 = |y|^2 + x2 (y1)^2 violates B_{0l} = 2 B_{x^l}",
                   MetricSpec::generalized(a, b)});
  }
  out.push_back({"rank1-c0", "rank-one pair member with c = 0 (B = 0) over the cubic A",
                 rank1_member(0.0)});
  out.push_back({"rank1-chalf", "rank-one pair member, c = 0.5 (1 + x1) d", rank1_member(0.5)});
  out.push_back({"rank1-cfull", "rank-one pair member, c = (1 + x1) d", rank1_member(1.0)});
  return out;
}

}  // namespace

const std::vector<Builtin>& all() {
  static const std::vector<Builtin> builtins = make_all();
  return builtins;
}

const MetricSpec* find(const std::string& name) {
  for (const Builtin& b : all())
    if (b.name == name) return &b.spec;
  return nullptr;
}

}  // namespace builtins
}  // namespace finsler
