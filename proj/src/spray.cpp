#include "finsler/spray.hpp"

#include <algorithm>
#include <cmath>

#include "finsler/errors.hpp"
#include "finsler/jet.hpp"

namespace finsler {

namespace {

void require_admissible(const MetricSpec& spec, const EvalPoint& pt, const char* who) {
  const Admissibility adm = admissibility(spec, pt);
  if (!(adm.a_value > 0.0) || !adm.ok)
    throw InadmissiblePointError(std::string(who) + " needs an admissible point (A = " +
                                     std::to_string(adm.a_value) + ", F^2 = " +
                                     std::to_string(adm.f2_value) + ")",
                                 adm.a_value, adm.f2_value);
}

}  // namespace

DualFlatForms dual_flat_forms(const MetricSpec& spec, const EvalPoint& pt) {
  require_admissible(spec, pt, "dual_flat_forms");
  const int n = spec.dimension();
  const double m = spec.root_order();
  const FormDerivs da = spec.a().derivs(pt);
  const double p1 = std::pow(da.value, 2.0 / m - 1.0);
  const double p2 = std::pow(da.value, 2.0 / m - 2.0);
  DualFlatForms out;
  out.lhs.assign(n, 0.0);
  out.rhs.assign(n, 0.0);
  for (int l = 0; l < n; ++l) {
    out.lhs[l] = (2.0 / m) * (2.0 / m - 1.0) * p2 * da.grad[l] * da.contracted +
                 (2.0 / m) * p1 * da.mixed_contracted[l];
    out.rhs[l] = (2.0 / m) * p1 * da.x_grad[l];
  }
  if (spec.b()) {
    const QuadDerivs db = spec.b()->derivs(pt);
    for (int l = 0; l < n; ++l) {
      out.lhs[l] += db.mixed_contracted[l];
      out.rhs[l] += db.x_grad[l];
    }
  }
  return out;
}

Vec spray_coefficients(const MetricSpec& spec, const EvalPoint& pt) {
  require_admissible(spec, pt, "spray_coefficients");
  const int n = spec.dimension();
  const Matrix g = fundamental_tensor(spec, pt);
  const Matrix g_inv = invert(g);
  const DualFlatForms forms = dual_flat_forms(spec, pt);
  Vec omega(n);
  for (int l = 0; l < n; ++l) omega[l] = forms.lhs[l] - forms.rhs[l];
  Vec gcoef = g_inv.apply(omega);
  for (double& v : gcoef) v *= 0.25;
  return gcoef;
}

namespace {

/// G^i as order-`order` jets in the y-directions at frozen x.
std::vector<Jet> spray_jets(const MetricSpec& spec, const EvalPoint& pt, int order) {
  const int n = spec.dimension();
  const double m = spec.root_order();
  const auto space = JetSpace::get(n, order);
  std::vector<Jet> y(n);
  for (int i = 0; i < n; ++i) y[i] = Jet::variable(space, i + 1, pt.y[i]);

  const Polynomial pa = spec.a().y_polynomial(pt.x);
  const Jet a = eval_polynomial(pa, y);
  std::vector<Jet> a_grad(n);
  std::vector<std::vector<Jet>> a_hess(n, std::vector<Jet>(n));
  for (int i = 0; i < n; ++i) {
    const Polynomial pi = pa.diff(i + 1);
    a_grad[i] = eval_polynomial(pi, y);
    for (int j = i; j < n; ++j) {
      a_hess[i][j] = eval_polynomial(pi.diff(j + 1), y);
      if (j != i) a_hess[j][i] = a_hess[i][j];
    }
  }
  Jet a_0(space, 0.0);
  std::vector<Jet> a_x(n, Jet(space, 0.0));
  std::vector<Jet> a_0l(n, Jet(space, 0.0));
  for (int k = 0; k < n; ++k) {
    const Polynomial pk = spec.a().y_polynomial_x_derivative(k + 1, pt.x);
    if (pk.is_zero()) continue;
    a_x[k] = eval_polynomial(pk, y);
    a_0 += a_x[k] * y[k];
    for (int l = 0; l < n; ++l) a_0l[l] += eval_polynomial(pk.diff(l + 1), y) * y[k];
  }

  // fundamental tensor as jets
  const Jet pref = a.pow(2.0 / m - 2.0) * (1.0 / (m * m));
  std::vector<std::vector<Jet>> g(n, std::vector<Jet>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Jet gij = pref * (a * a_hess[i][j] * m + a_grad[i] * a_grad[j] * (2.0 - m));
      g[i][j] = gij;
      if (j != i) g[j][i] = g[i][j];
    }

  // omega_l = lhs_l - rhs_l
  const Jet q1 = a.pow(2.0 / m - 1.0);
  const Jet q2 = a.pow(2.0 / m - 2.0);
  std::vector<Jet> omega(n);
  for (int l = 0; l < n; ++l)
    omega[l] = q2 * a_grad[l] * a_0 * ((2.0 / m) * (2.0 / m - 1.0)) +
               q1 * (a_0l[l] - a_x[l]) * (2.0 / m);

  if (spec.b()) {
    const Matrix b = spec.b()->coefficient_matrix(pt.x);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        if (b(i, j) != 0.0) {
          g[i][j] += Jet(space, b(i, j));
          if (j != i) g[j][i] += Jet(space, b(i, j));
        }
    for (int k = 0; k < n; ++k) {
      Matrix bk(n);
      bool any = false;
      for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
          const Polynomial pd = spec.b()->entry(i, j).diff(k + 1);
          if (!pd.is_zero()) {
            bk(i - 1, j - 1) = pd.eval(pt.x);
            any = true;
          }
        }
      if (!any) continue;
      // B_{x^k} = bk_ij y^i y^j; contributes -B_{x^l} and +B_{0l} terms
      Jet bxk(space, 0.0);
      std::vector<Jet> bky(n, Jet(space, 0.0));
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
          if (bk(i, j) != 0.0) bky[i] += y[j] * bk(i, j);
        bxk += y[i] * bky[i];
      }
      omega[k] -= bxk;                                        // -B_{x^k}
      for (int l = 0; l < n; ++l) omega[l] += bky[l] * y[k] * 2.0;  // +B_{0l}
    }
  }

  const auto g_inv = invert_jet_matrix(g);
  std::vector<Jet> gcoef(n, Jet(space, 0.0));
  for (int i = 0; i < n; ++i) {
    Jet s(space, 0.0);
    for (int l = 0; l < n; ++l) s += g_inv[i][l] * omega[l];
    gcoef[i] = s * 0.25;
  }
  return gcoef;
}

}  // namespace

SprayEval spray_eval(const MetricSpec& spec, const EvalPoint& pt, bool with_douglas) {
  require_admissible(spec, pt, "spray_eval");
  const int n = spec.dimension();
  const int order = with_douglas ? 4 : 3;
  const std::vector<Jet> gj = spray_jets(spec, pt, order);

  SprayEval ev;
  ev.at = pt;
  ev.has_douglas = with_douglas;
  ev.g_coeffs.resize(n);
  for (int i = 0; i < n; ++i) ev.g_coeffs[i] = gj[i].value();

  ev.berwald = Tensor4(n);
  std::vector<int> alpha(n);
  for (int j = 0; j < n; ++j)
    for (int k = j; k < n; ++k)
      for (int l = k; l < n; ++l) {
        std::fill(alpha.begin(), alpha.end(), 0);
        alpha[j] += 1;
        alpha[k] += 1;
        alpha[l] += 1;
        for (int i = 0; i < n; ++i) {
          const double v = gj[i].derivative(alpha);
          int idx[3] = {j, k, l};
          std::sort(idx, idx + 3);
          do {
            ev.berwald.at(i, idx[0], idx[1], idx[2]) = v;
          } while (std::next_permutation(idx, idx + 3));
        }
      }

  ev.mean_berwald = Matrix(n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += ev.berwald.at(i, j, k, i);
      ev.mean_berwald(j, k) = 0.5 * s;
    }

  if (with_douglas) {
    ev.mean_berwald_grad = Tensor3(n);
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k)
        for (int l = k; l < n; ++l) {
          double s = 0.0;
          for (int i = 0; i < n; ++i) {
            std::fill(alpha.begin(), alpha.end(), 0);
            alpha[j] += 1;
            alpha[k] += 1;
            alpha[l] += 1;
            alpha[i] += 1;
            s += gj[i].derivative(alpha);
          }
          const double v = 0.5 * s;  // E_{jk,l}, symmetric in j,k,l
          int idx[3] = {j, k, l};
          std::sort(idx, idx + 3);
          do {
            ev.mean_berwald_grad.at(idx[0], idx[1], idx[2]) = v;
          } while (std::next_permutation(idx, idx + 3));
        }

    ev.douglas = Tensor4(n);
    const double w = 2.0 / (n + 1.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            double trace_part = ev.mean_berwald_grad.at(j, k, l) * pt.y[i];
            if (i == l) trace_part += ev.mean_berwald(j, k);
            if (i == k) trace_part += ev.mean_berwald(j, l);
            if (i == j) trace_part += ev.mean_berwald(k, l);
            ev.douglas.at(i, j, k, l) = ev.berwald.at(i, j, k, l) - w * trace_part;
          }
  }
  return ev;
}

Tensor4 berwald_curvature(const MetricSpec& spec, const EvalPoint& pt) {
  return spray_eval(spec, pt, /*with_douglas=*/false).berwald;
}

Matrix mean_berwald(const MetricSpec& spec, const EvalPoint& pt) {
  return spray_eval(spec, pt, /*with_douglas=*/false).mean_berwald;
}

Tensor4 douglas_curvature(const MetricSpec& spec, const EvalPoint& pt) {
  return spray_eval(spec, pt, /*with_douglas=*/true).douglas;
}

GeodesicTrace geodesic_integrate(const MetricSpec& spec, const Vec& x0, const Vec& y0,
                                 double t_end, double step) {
  if (!(step > 0.0) || !(t_end > 0.0))
    throw InputError("geodesic integration needs positive step and horizon");
  const int n = spec.dimension();
  if (static_cast<int>(x0.size()) != n || static_cast<int>(y0.size()) != n)
    throw InputError("geodesic start point dimension mismatch");

  GeodesicTrace trace;
  auto accel = [&](const Vec& x, const Vec& v) {
    Vec g = spray_coefficients(spec, EvalPoint{x, v});
    for (double& gi : g) gi *= -2.0;
    return g;
  };

  Vec x = x0, v = y0;
  const long steps = std::lround(t_end / step);
  double f0 = 0.0;
  try {
    f0 = metric_value(spec, EvalPoint{x, v});
  } catch (const InadmissiblePointError& e) {
    throw IntegrationError(std::string("geodesic start point is inadmissible: ") + e.what());
  }
  trace.times.push_back(0.0);
  trace.positions.push_back(x);
  trace.velocities.push_back(v);
  trace.f_values.push_back(f0);

  Vec xa(n), va(n);
  for (long s = 1; s <= steps; ++s) {
    try {
      const Vec k1x = v;
      const Vec k1v = accel(x, v);
      for (int i = 0; i < n; ++i) {
        xa[i] = x[i] + 0.5 * step * k1x[i];
        va[i] = v[i] + 0.5 * step * k1v[i];
      }
      const Vec k2x = va;
      const Vec k2v = accel(xa, va);
      for (int i = 0; i < n; ++i) {
        xa[i] = x[i] + 0.5 * step * k2x[i];
        va[i] = v[i] + 0.5 * step * k2v[i];
      }
      const Vec k3x = va;
      const Vec k3v = accel(xa, va);
      for (int i = 0; i < n; ++i) {
        xa[i] = x[i] + step * k3x[i];
        va[i] = v[i] + step * k3v[i];
      }
      const Vec k4x = va;
      const Vec k4v = accel(xa, va);
      for (int i = 0; i < n; ++i) {
        x[i] += step / 6.0 * (k1x[i] + 2.0 * k2x[i] + 2.0 * k3x[i] + k4x[i]);
        v[i] += step / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
      }
      for (int i = 0; i < n; ++i)
        if (!std::isfinite(x[i]) || !std::isfinite(v[i]))
          throw IntegrationError("geodesic state became non-finite at t = " +
                                 std::to_string(s * step));
      const double f = metric_value(spec, EvalPoint{x, v});
      trace.times.push_back(s * step);
      trace.positions.push_back(x);
      trace.velocities.push_back(v);
      trace.f_values.push_back(f);
      trace.energy_drift = std::max(trace.energy_drift, std::abs(f - f0));
    } catch (const InadmissiblePointError& e) {
      trace.stop_reason = std::string("trajectory left the admissible domain: ") + e.what();
      return trace;
    } catch (const SingularMatrixError& e) {
      trace.stop_reason = std::string("fundamental tensor degenerated: ") + e.what();
      return trace;
    }
  }
  trace.completed = true;
  return trace;
}

}  // namespace finsler
