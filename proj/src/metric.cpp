#include "finsler/metric.hpp"

#include <cmath>
#include <utility>

#include "finsler/errors.hpp"
#include "finsler/jet.hpp"
#include "finsler/numdiff.hpp"

namespace finsler {

MetricSpec::MetricSpec(MetricKind kind, SymmetricTensorField a, std::optional<QuadraticFormField> b,
                       std::optional<RankOneForm> rank1, bool pseudo_finsler_ok)
    : kind_(kind),
      a_(std::move(a)),
      b_(std::move(b)),
      rank1_(std::move(rank1)),
      pseudo_finsler_ok_(pseudo_finsler_ok) {
  if (a_.order() < 2) throw InputError("metric requires m >= 2");
  if (b_ && b_->dimension() != a_.dimension())
    throw InputError("B dimension does not match A dimension");
  if (rank1_ && rank1_->dimension() != a_.dimension())
    throw InputError("rank-one form dimension does not match A dimension");
}

MetricSpec MetricSpec::mroot(SymmetricTensorField a, bool pseudo_finsler_ok) {
  return MetricSpec(MetricKind::mroot, std::move(a), std::nullopt, std::nullopt,
                    pseudo_finsler_ok);
}

MetricSpec MetricSpec::generalized(SymmetricTensorField a, QuadraticFormField b,
                                   bool pseudo_finsler_ok) {
  return MetricSpec(MetricKind::generalized, std::move(a), std::move(b), std::nullopt,
                    pseudo_finsler_ok);
}

MetricSpec MetricSpec::generalized_rank1(SymmetricTensorField a, RankOneForm form,
                                         bool pseudo_finsler_ok) {
  auto b = form.to_quadratic();
  return MetricSpec(MetricKind::generalized_rank1, std::move(a), std::move(b), std::move(form),
                    pseudo_finsler_ok);
}

Admissibility admissibility(const MetricSpec& spec, const EvalPoint& pt) {
  const double a = spec.a().value(pt);
  if (!(a > 0.0)) return {a, 0.0, false};
  const double m = spec.root_order();
  double f2 = std::pow(a, 2.0 / m);
  if (spec.b()) f2 += spec.b()->value(pt);
  return {a, f2, f2 > 0.0};
}

double metric_value(const MetricSpec& spec, const EvalPoint& pt) {
  const Admissibility adm = admissibility(spec, pt);
  if (!(adm.a_value > 0.0))
    throw InadmissiblePointError("inadmissible point: A = " + std::to_string(adm.a_value) +
                                     " <= 0",
                                 adm.a_value, adm.f2_value);
  if (!adm.ok)
    throw InadmissiblePointError("inadmissible point: F^2 = " + std::to_string(adm.f2_value) +
                                     " <= 0",
                                 adm.a_value, adm.f2_value);
  if (spec.kind() == MetricKind::mroot)
    return std::pow(adm.a_value, 1.0 / spec.root_order());
  return std::sqrt(adm.f2_value);
}

double f_squared(const MetricSpec& spec, const EvalPoint& pt) {
  const double a = spec.a().value(pt);
  if (!(a > 0.0))
    throw InadmissiblePointError("F^2 undefined: A = " + std::to_string(a) + " <= 0", a, 0.0);
  double f2 = std::pow(a, 2.0 / spec.root_order());
  if (spec.b()) f2 += spec.b()->value(pt);
  return f2;
}

Matrix fundamental_tensor(const MetricSpec& spec, const EvalPoint& pt) {
  const Admissibility adm = admissibility(spec, pt);
  if (!adm.ok || !(adm.a_value > 0.0))
    throw InadmissiblePointError("fundamental tensor needs an admissible point (A = " +
                                     std::to_string(adm.a_value) + ")",
                                 adm.a_value, adm.f2_value);
  const int n = spec.dimension();
  const double m = spec.root_order();
  const double a = adm.a_value;
  const Vec ai = spec.a().grad_y(pt);
  const Matrix aij = spec.a().hess_y(pt);
  const double pref = std::pow(a, 2.0 / m - 2.0) / (m * m);
  Matrix g(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      g(i, j) = pref * (m * a * aij(i, j) + (2.0 - m) * ai[i] * ai[j]);
  if (spec.b()) {
    const Matrix b = spec.b()->coefficient_matrix(pt.x);
    g = g + b;
  }
  return g;
}

Matrix hessian_f2_numeric(const MetricSpec& spec, const EvalPoint& pt, double h0) {
  const int n = spec.dimension();
  const Vec& x = pt.x;
  numdiff::ScalarFn f2 = [&](std::span<const double> y) {
    return f_squared(spec, EvalPoint{x, Vec(y.begin(), y.end())});
  };
  Matrix h(n);
  try {
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double step = numdiff::scaled_step(pt.y, i, h0);
        const double v = 0.5 * numdiff::second(f2, pt.y, i, j, step);
        h(i, j) = v;
        h(j, i) = v;
      }
  } catch (const InadmissiblePointError& e) {
    throw OracleFailureError(std::string("numeric Hessian stencil left the admissible domain: ") +
                             e.what());
  }
  return h;
}

Matrix inverse_g_mroot(const MetricSpec& spec, const EvalPoint& pt) {
  if (spec.kind() != MetricKind::mroot)
    throw InputError("closed-form inverse metric applies to m-th root metrics only");
  const double a = spec.a().value(pt);
  if (!(a > 0.0))
    throw InadmissiblePointError("inverse metric needs A > 0, got " + std::to_string(a), a, 0.0);
  const int n = spec.dimension();
  const double m = spec.root_order();
  const Matrix a_inv = invert(spec.a().hess_y(pt));
  const double pref = std::pow(a, -2.0 / m);
  Matrix ginv(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      ginv(i, j) =
          pref * (m * a * a_inv(i, j) + (m - 2.0) / (m - 1.0) * pt.y[i] * pt.y[j]);
  return ginv;
}

MetricEval evaluate_metric(const MetricSpec& spec, const EvalPoint& pt) {
  MetricEval ev;
  ev.at = pt;
  const Admissibility adm = admissibility(spec, pt);
  ev.a_value = adm.a_value;
  if (!(adm.a_value > 0.0) || !adm.ok)
    throw InadmissiblePointError("inadmissible point: A = " + std::to_string(adm.a_value) +
                                     ", F^2 = " + std::to_string(adm.f2_value),
                                 adm.a_value, adm.f2_value);
  ev.b_value = spec.b() ? spec.b()->value(pt) : 0.0;
  ev.f_value = std::sqrt(adm.f2_value);
  ev.g = fundamental_tensor(spec, pt);
  ev.positive_definite = is_positive_definite(ev.g);
  if (!ev.positive_definite && !spec.pseudo_finsler_ok())
    throw InadmissiblePointError(
        "fundamental tensor is not positive definite at this point; "
        "set pseudo_finsler_ok to evaluate pseudo-Finsler metrics",
        adm.a_value, adm.f2_value);
  const InverseResult inv = invert_with_condition(ev.g);
  ev.g_inv = inv.inverse;
  ev.g_condition = inv.condition;
  ev.y_low = ev.g.apply(pt.y);
  return ev;
}

Tensor3 cartan_torsion(const MetricSpec& spec, const EvalPoint& pt) {
  const int n = spec.dimension();
  const double a0 = spec.a().value(pt);
  if (!(a0 > 0.0))
    throw InadmissiblePointError("Cartan torsion needs A > 0, got " + std::to_string(a0), a0, 0.0);
  const auto space = JetSpace::get(n, 3);
  std::vector<Jet> y(n);
  for (int i = 0; i < n; ++i) y[i] = Jet::variable(space, i + 1, pt.y[i]);
  const Polynomial a_poly = spec.a().y_polynomial(pt.x);
  Jet f2 = eval_polynomial(a_poly, y).pow(2.0 / spec.root_order());
  if (spec.b()) {
    const Matrix b = spec.b()->coefficient_matrix(pt.x);
    Jet bjet(space, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (b(i, j) != 0.0) bjet += y[i] * y[j] * b(i, j);
    f2 += bjet;
  }
  Tensor3 c(n);
  std::vector<int> alpha(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k) {
        std::fill(alpha.begin(), alpha.end(), 0);
        alpha[i] += 1;
        alpha[j] += 1;
        alpha[k] += 1;
        const double v = 0.25 * f2.derivative(alpha);
        int idx[3] = {i, j, k};
        std::sort(idx, idx + 3);
        do {
          c.at(idx[0], idx[1], idx[2]) = v;
        } while (std::next_permutation(idx, idx + 3));
      }
  return c;
}

double riemannian_score(const MetricSpec& spec, const EvalPoint& pt) {
  return cartan_torsion(spec, pt).max_abs();
}

}  // namespace finsler
