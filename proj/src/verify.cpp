#include "finsler/verify.hpp"

#include <algorithm>
#include <cmath>

#include "finsler/errors.hpp"
#include "finsler/jet.hpp"
#include "finsler/parallel.hpp"

namespace finsler {
namespace verify {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    default: return "inconclusive";
  }
}

void ResidualReport::add(const EvalPoint& at, double residual) {
  per_point.push_back({at, residual});
  if (worst_index < 0 || residual > max_residual) {
    max_residual = residual;
    worst_index = static_cast<int>(per_point.size()) - 1;
  }
}

void ResidualReport::finalize() {
  if (attempted == 0 || 2 * skipped > attempted) {
    verdict = Verdict::inconclusive;
    return;
  }
  verdict = max_residual <= tolerance ? Verdict::pass : Verdict::fail;
}

double compare_covectors(std::span<const double> u, std::span<const double> v) {
  double worst = 0.0;
  for (size_t l = 0; l < u.size(); ++l) {
    const double scale = std::max({1.0, std::abs(u[l]), std::abs(v[l])});
    worst = std::max(worst, std::abs(u[l] - v[l]) / scale);
  }
  return worst;
}

namespace {

Verdict combine(Verdict a, Verdict b) {
  if (a == Verdict::fail || b == Verdict::fail) return Verdict::fail;
  if (a == Verdict::inconclusive || b == Verdict::inconclusive) return Verdict::inconclusive;
  return Verdict::pass;
}

/// Draws opts.samples points admissible for every listed spec, giving up
/// after 10x oversampling. Drawing is sequential so the stream depends only
/// on the seed.
std::vector<EvalPoint> draw_points(std::span<const MetricSpec* const> specs,
                                   const CheckOptions& opts, int count) {
  PointSampler sampler(opts.seed);
  std::vector<EvalPoint> points;
  points.reserve(count);
  const int n = specs.empty() ? 0 : specs[0]->dimension();
  long budget = 10L * count;
  while (static_cast<int>(points.size()) < count && budget-- > 0) {
    EvalPoint pt = sampler.point(n, opts.box);
    bool ok = true;
    for (const MetricSpec* spec : specs)
      if (!admissibility(*spec, pt).ok) {
        ok = false;
        break;
      }
    if (ok) points.push_back(std::move(pt));
  }
  return points;
}

struct RankOnePairBlocks {
  double a;       // A
  Vec c, d;       // c_i(x), d_i(x)
  Vec d_up;       // d^k
  double k;       // 1/(1 + c_k d^k)
  Vec frak_b;     // B_{0l} - B_{x^l}
  Vec delta;      // Delta_k of the base metric
  Vec frak_f;     // (F^2)_{x^k y^l} y^k - (F^2)_{x^l} of the base metric
  Matrix a_inv;   // A^{ij}
  Matrix g_inv;   // inverse metric used for raising
  FormDerivs da;
};

void require_rank1_pair(const MetricSpec& bar, const MetricSpec& base) {
  if (bar.kind() != MetricKind::generalized_rank1)
    throw InputError("rank-one projective machinery needs a rank-one generalized metric as the first member");
  if (base.kind() != MetricKind::mroot)
    throw InputError("rank-one projective machinery needs an m-th root metric as the second member");
  if (!(bar.a() == base.a()))
    throw InputError("rank-one projective machinery needs both metrics to share the same A");
}

RankOnePairBlocks rank1_pair_blocks(const MetricSpec& bar, const MetricSpec& base, const EvalPoint& pt,
                               RaisingMetric interp) {
  require_rank1_pair(bar, base);
  const int n = base.dimension();
  const double m = base.root_order();
  RankOnePairBlocks blk;
  blk.da = base.a().derivs(pt);
  blk.a = blk.da.value;
  if (!(blk.a > 0.0))
    throw InadmissiblePointError("rank-one projective residuals need A > 0, got " + std::to_string(blk.a),
                                 blk.a, 0.0);
  blk.c = bar.rank1()->c_at(pt.x);
  blk.d = bar.rank1()->d_at(pt.x);
  blk.a_inv = invert(blk.da.hess);

  const Matrix g = interp == RaisingMetric::root ? fundamental_tensor(base, pt)
                                                       : fundamental_tensor(bar, pt);
  blk.g_inv = invert(g);
  blk.d_up.assign(n, 0.0);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) blk.d_up[k] += blk.g_inv(l, k) * blk.d[l];

  const double denom = 1.0 + dot(blk.c, blk.d_up);
  if (std::abs(denom) <= 1e-12)
    throw DegenerateUpdateError("degenerate rank-one pair: 1 + c_m d^m = " +
                                    std::to_string(denom),
                                denom);
  blk.k = 1.0 / denom;

  const QuadDerivs db = bar.b()->derivs(pt);
  blk.frak_b.assign(n, 0.0);
  for (int l = 0; l < n; ++l) blk.frak_b[l] = db.mixed_contracted[l] - db.x_grad[l];

  const double p2 = std::pow(blk.a, 2.0 / m - 2.0);
  blk.delta.assign(n, 0.0);
  for (int k = 0; k < n; ++k)
    blk.delta[k] = p2 / m *
                   ((2.0 / m - 1.0) * blk.da.grad[k] * blk.da.contracted +
                    blk.a * blk.da.mixed_contracted[k] - blk.a * blk.da.x_grad[k]);
  // (FO): frak_f = 2 Delta
  blk.frak_f.assign(n, 0.0);
  for (int k = 0; k < n; ++k) blk.frak_f[k] = 2.0 * blk.delta[k];
  return blk;
}

}  // namespace

Vec dual_flat_residual(const MetricSpec& spec, const EvalPoint& pt) {
  const DualFlatForms forms = dual_flat_forms(spec, pt);
  Vec r(forms.lhs.size());
  for (size_t l = 0; l < r.size(); ++l) r[l] = forms.lhs[l] - 2.0 * forms.rhs[l];
  return r;
}

Vec coefficient_flatness_residual(const MetricSpec& spec, const EvalPoint& pt) {
  const double a = spec.a().value(pt);
  if (!(a > 0.0))
    throw InadmissiblePointError("coefficient flatness residual needs A > 0, got " + std::to_string(a), a, 0.0);
  const int n = spec.dimension();
  const double m = spec.root_order();
  const FormDerivs da = spec.a().derivs(pt);
  Vec b_term(n, 0.0);
  if (spec.b()) {
    const QuadDerivs db = spec.b()->derivs(pt);
    const double amp = 0.5 * m * std::pow(a, (2.0 * m - 2.0) / m);
    for (int l = 0; l < n; ++l)
      b_term[l] = amp * (db.mixed_contracted[l] - 2.0 * db.x_grad[l]);
  }
  Vec r(n);
  for (int l = 0; l < n; ++l) {
    const double rhs = ((2.0 / m - 1.0) * da.contracted * da.grad[l] +
                        a * da.mixed_contracted[l] + b_term[l]) /
                       (2.0 * a);
    r[l] = da.x_grad[l] - rhs;
  }
  return r;
}

Vec delta_k(const MetricSpec& spec, const EvalPoint& pt) {
  const double a = spec.a().value(pt);
  if (!(a > 0.0))
    throw InadmissiblePointError("Delta_k needs A > 0, got " + std::to_string(a), a, 0.0);
  const int n = spec.dimension();
  const double m = spec.root_order();
  const FormDerivs da = spec.a().derivs(pt);
  const double p2 = std::pow(a, 2.0 / m - 2.0);
  Vec out(n);
  for (int k = 0; k < n; ++k)
    out[k] = p2 / m *
             ((2.0 / m - 1.0) * da.grad[k] * da.contracted + a * da.mixed_contracted[k] -
              a * da.x_grad[k]);
  return out;
}

Vec projective_sufficiency_residual(const MetricSpec& bar, const MetricSpec& base,
                                    const EvalPoint& pt, RaisingMetric interp) {
  const RankOnePairBlocks blk = rank1_pair_blocks(bar, base, pt, interp);
  const int n = base.dimension();
  const double one_plus = 1.0 / blk.k;  // 1 + c_k d^k
  double contraction = 0.0;             // d^k [2 Delta_k + frakB_k]
  for (int k = 0; k < n; ++k) contraction += blk.d_up[k] * (2.0 * blk.delta[k] + blk.frak_b[k]);
  Vec r(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double t1 = 0.0, t2 = 0.0;
    for (int j = 0; j < n; ++j) {
      t1 += blk.a_inv(i, j) * blk.frak_b[j];
      t2 += blk.a_inv(i, j) * blk.c[j];
    }
    r[i] = one_plus * t1 - contraction * t2;
  }
  return r;
}

Vec spray_reduction_residual(const MetricSpec& bar, const MetricSpec& base, const EvalPoint& pt,
                             RaisingMetric interp) {
  const RankOnePairBlocks blk = rank1_pair_blocks(bar, base, pt, interp);
  const int n = base.dimension();
  const double m = base.root_order();
  const double amp = m * std::pow(blk.a, (m - 2.0) / m);
  double upsilon = 0.0;
  for (int j = 0; j < n; ++j) upsilon += blk.k * blk.d_up[j] / 4.0 * blk.frak_f[j];
  double db = 0.0;  // d^l frakB_l
  for (int l = 0; l < n; ++l) db += blk.d_up[l] * blk.frak_b[l];
  const double bracket = 4.0 * upsilon + blk.k * db;
  Vec r(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double t1 = 0.0, calA = 0.0;
    for (int l = 0; l < n; ++l) {
      t1 += blk.a_inv(i, l) * blk.frak_b[l];
      calA += blk.a_inv(i, l) * blk.c[l];
    }
    calA *= amp;
    r[i] = amp * t1 - bracket * calA;
  }
  return r;
}

double rigidity_scalar(const MetricSpec& bar, const MetricSpec& base, const EvalPoint& pt,
                       RaisingMetric interp) {
  const RankOnePairBlocks blk = rank1_pair_blocks(bar, base, pt, interp);
  const int n = base.dimension();
  const double m = base.root_order();
  const double p2 = std::pow(blk.a, 2.0 / m - 2.0);
  const double dc = dot(blk.d_up, blk.c);
  double bracket_sum = 0.0;
  for (int j = 0; j < n; ++j)
    bracket_sum += blk.d_up[j] * ((2.0 / m - 1.0) * blk.da.grad[j] * blk.da.contracted +
                                  blk.a * blk.da.mixed_contracted[j] -
                                  blk.a * blk.da.x_grad[j]);
  double db = 0.0;
  for (int i = 0; i < n; ++i) db += blk.d_up[i] * blk.frak_b[i];
  return 2.0 * p2 * dc * bracket_sum - m * db;
}

RigiditySplits rigidity_splits(const MetricSpec& bar, const MetricSpec& base,
                               const EvalPoint& pt, RaisingMetric interp) {
  const RankOnePairBlocks blk = rank1_pair_blocks(bar, base, pt, interp);
  const int n = base.dimension();
  const double df = dot(blk.d_up, blk.frak_f);  // d^l frakF_l
  const double db = dot(blk.d_up, blk.frak_b);  // d^l frakB_l
  const double dc = dot(blk.d_up, blk.c);       // d^j c_j
  RigiditySplits out;
  out.rational_part.assign(n, 0.0);
  out.irrational_part.assign(n, 0.0);
  out.contracted_rational.assign(n, 0.0);
  out.contracted_irrational.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double ac = 0.0, ab = 0.0;
    for (int p = 0; p < n; ++p) {
      ac += blk.a_inv(i, p) * blk.c[p];
      ab += blk.a_inv(i, p) * blk.frak_b[p];
    }
    out.rational_part[i] = df * ac - ab;
    out.irrational_part[i] = dc * ab - db * ac;
  }
  for (int s = 0; s < n; ++s) {
    out.contracted_rational[s] = blk.frak_b[s] - df * blk.c[s];
    out.contracted_irrational[s] = dc * blk.frak_b[s] - db * blk.c[s];
  }
  return out;
}

ProjectivePoint projective_check(const MetricSpec& first, const MetricSpec& second,
                                 const EvalPoint& pt, double tol) {
  const Vec g1 = spray_coefficients(first, pt);
  const Vec g2 = spray_coefficients(second, pt);
  const int n = static_cast<int>(g1.size());
  Vec delta(n);
  for (int i = 0; i < n; ++i) delta[i] = g1[i] - g2[i];
  const double scale = std::max(1.0, max_abs(delta) * max_abs(pt.y));
  double cross = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      cross = std::max(cross, std::abs(delta[i] * pt.y[j] - delta[j] * pt.y[i]));
  cross /= scale;
  const double p = dot(delta, pt.y) / dot(pt.y, pt.y);
  return {cross <= tol, p, cross};
}

FlatnessConditions flatness_conditions_check(const MetricSpec& spec, const CheckOptions& opts) {
  FlatnessConditions result;
  result.irreducibility_asserted = opts.irreducible_asserted;
  result.b_condition.name = "b-flatness";
  result.b_condition.tolerance = opts.tol;
  result.theta_condition.name = "theta-flatness";
  result.theta_condition.tolerance = opts.tol;

  const int n = spec.dimension();
  const double m = spec.root_order();
  const int n_x = std::max(1, opts.samples / std::max(1, opts.y_per_x));
  PointSampler sampler(opts.seed);
  const auto space = JetSpace::get(n, 1);

  for (int ix = 0; ix < n_x; ++ix) {
    const Vec x = sampler.vector(n, opts.box.x_lo, opts.box.x_hi);
    std::vector<Vec> thetas;
    std::vector<EvalPoint> pts;
    for (int iy = 0; iy < opts.y_per_x; ++iy) {
      EvalPoint pt{x, sampler.vector(n, opts.box.y_lo, opts.box.y_hi)};
      result.b_condition.attempted += 1;
      result.theta_condition.attempted += 1;
      if (!admissibility(spec, pt).ok) {
        result.b_condition.skipped += 1;
        result.theta_condition.skipped += 1;
        continue;
      }
      // B condition: B_{0l} vs 2 B_{x^l}
      if (spec.b()) {
        const QuadDerivs db = spec.b()->derivs(pt);
        Vec two_bx(n);
        for (int l = 0; l < n; ++l) two_bx[l] = 2.0 * db.x_grad[l];
        result.b_condition.add(pt, compare_covectors(db.mixed_contracted, two_bx));
      } else {
        result.b_condition.add(pt, 0.0);
      }
      // theta_l = d(A_0/A)/dy^l by order-1 jets
      std::vector<Jet> y(n);
      for (int i = 0; i < n; ++i) y[i] = Jet::variable(space, i + 1, pt.y[i]);
      const Jet a_jet = eval_polynomial(spec.a().y_polynomial(pt.x), y);
      Jet a0_jet(space, 0.0);
      for (int k = 0; k < n; ++k) {
        const Polynomial pk = spec.a().y_polynomial_x_derivative(k + 1, pt.x);
        if (!pk.is_zero()) a0_jet += eval_polynomial(pk, y) * y[k];
      }
      const Jet theta_jet = a0_jet / a_jet;
      Vec theta(n);
      std::vector<int> alpha(n, 0);
      for (int l = 0; l < n; ++l) {
        std::fill(alpha.begin(), alpha.end(), 0);
        alpha[l] = 1;
        theta[l] = theta_jet.derivative(alpha);
      }
      thetas.push_back(std::move(theta));
      pts.push_back(std::move(pt));
    }
    if (thetas.empty()) continue;

    Vec theta_hat(n, 0.0);
    for (const Vec& t : thetas)
      for (int l = 0; l < n; ++l) theta_hat[l] += t[l];
    for (int l = 0; l < n; ++l) theta_hat[l] /= static_cast<double>(thetas.size());
    for (const Vec& t : thetas)
      result.theta.linearity_residual =
          std::max(result.theta.linearity_residual, compare_covectors(t, theta_hat));
    result.theta.x_samples.push_back(x);
    result.theta.theta_per_x.push_back(theta_hat);

    // theta condition with the recovered 1-form: A_{x^l} vs (1/3m)[m A theta_l + 2 theta A_l]
    for (size_t p = 0; p < pts.size(); ++p) {
      const EvalPoint& pt = pts[p];
      const FormDerivs da = spec.a().derivs(pt);
      const double theta_val = dot(theta_hat, pt.y);
      Vec rhs(n);
      for (int l = 0; l < n; ++l)
        rhs[l] = (m * da.value * theta_hat[l] + 2.0 * theta_val * da.grad[l]) / (3.0 * m);
      result.theta_condition.add(pt, compare_covectors(da.x_grad, rhs));
    }
  }
  result.b_condition.finalize();
  result.theta_condition.finalize();
  return result;
}

DualFlatCheck check_dual_flat(const MetricSpec& spec, const CheckOptions& opts) {
  DualFlatCheck check;
  check.definition.name = "dual-flat-definition";
  check.definition.tolerance = opts.tol;
  check.coefficient_form.name = "coefficient-flatness";
  check.coefficient_form.tolerance = opts.tol;

  const MetricSpec* specs[] = {&spec};
  const std::vector<EvalPoint> points = draw_points(specs, opts, opts.samples);
  check.definition.attempted = opts.samples;
  check.definition.skipped = opts.samples - static_cast<int>(points.size());
  check.coefficient_form.attempted = check.definition.attempted;
  check.coefficient_form.skipped = check.definition.skipped;

  struct Row {
    double definition = 0.0;
    double coefficient_form = 0.0;
    bool ok = false;
  };
  std::vector<Row> rows(points.size());
  parallel_for(static_cast<int>(points.size()), [&](int i) {
    const EvalPoint& pt = points[i];
    const DualFlatForms forms = dual_flat_forms(spec, pt);
    Vec two_rhs(forms.rhs.size());
    for (size_t l = 0; l < two_rhs.size(); ++l) two_rhs[l] = 2.0 * forms.rhs[l];
    rows[i].definition = compare_covectors(forms.lhs, two_rhs);

    const int n = spec.dimension();
    const double m = spec.root_order();
    const FormDerivs da = spec.a().derivs(pt);
    Vec b_term(n, 0.0);
    if (spec.b()) {
      const QuadDerivs db = spec.b()->derivs(pt);
      const double amp = 0.5 * m * std::pow(da.value, (2.0 * m - 2.0) / m);
      for (int l = 0; l < n; ++l) b_term[l] = amp * (db.mixed_contracted[l] - 2.0 * db.x_grad[l]);
    }
    Vec rhs(n);
    for (int l = 0; l < n; ++l)
      rhs[l] = ((2.0 / m - 1.0) * da.contracted * da.grad[l] + da.value * da.mixed_contracted[l] +
                b_term[l]) /
               (2.0 * da.value);
    rows[i].coefficient_form = compare_covectors(da.x_grad, rhs);
    rows[i].ok = true;
  });
  for (size_t i = 0; i < rows.size(); ++i) {
    check.definition.add(points[i], rows[i].definition);
    check.coefficient_form.add(points[i], rows[i].coefficient_form);
  }
  check.definition.finalize();
  check.coefficient_form.finalize();

  check.conditions = flatness_conditions_check(spec, opts);
  check.overall = combine(combine(check.definition.verdict, check.coefficient_form.verdict),
                          combine(check.conditions->b_condition.verdict,
                                  check.conditions->theta_condition.verdict));
  return check;
}

ProjectiveCheck check_projective(const MetricSpec& bar, const MetricSpec& base,
                                 const CheckOptions& opts) {
  ProjectiveCheck check;
  check.spray_comparison.name = "spray-comparison";
  check.spray_comparison.tolerance = opts.tol;

  const MetricSpec* specs[] = {&bar, &base};
  const std::vector<EvalPoint> points = draw_points(specs, opts, opts.samples);
  check.spray_comparison.attempted = opts.samples;
  check.spray_comparison.skipped = opts.samples - static_cast<int>(points.size());

  const bool rank1_pair = bar.kind() == MetricKind::generalized_rank1 &&
                          base.kind() == MetricKind::mroot && bar.a() == base.a();
  if (rank1_pair) {
    check.sufficiency.emplace();
    check.sufficiency->name = "projective-sufficiency";
    check.sufficiency->tolerance = opts.tol;
    check.sufficiency->attempted = check.spray_comparison.attempted;
    check.sufficiency->skipped = check.spray_comparison.skipped;
    check.reduction.emplace();
    check.reduction->name = "spray-reduction";
    check.reduction->tolerance = opts.tol;
    check.reduction->attempted = check.spray_comparison.attempted;
    check.reduction->skipped = check.spray_comparison.skipped;
    check.rigidity_available = true;
  }

  struct Row {
    double cross = 0.0;
    double p = 0.0;
    double sufficiency = 0.0;
    double reduction = 0.0;
    double pp = 0.0;
    bool rank1_ok = false;
    bool ok = false;
  };
  std::vector<Row> rows(points.size());
  parallel_for(static_cast<int>(points.size()), [&](int i) {
    const EvalPoint& pt = points[i];
    try {
      const ProjectivePoint pp = projective_check(bar, base, pt, opts.tol);
      rows[i].cross = pp.cross_residual;
      rows[i].p = pp.p;
      rows[i].ok = true;
    } catch (const Error&) {
      return;  // counted as skipped below
    }
    if (rank1_pair) {
      try {
        const Vec pr = projective_sufficiency_residual(bar, base, pt, opts.interp);
        const Vec l3 = spray_reduction_residual(bar, base, pt, opts.interp);
        rows[i].sufficiency = max_abs(pr);
        rows[i].reduction = max_abs(l3);
        rows[i].pp = rigidity_scalar(bar, base, pt, opts.interp);
        rows[i].rank1_ok = true;
      } catch (const Error&) {
        rows[i].rank1_ok = false;
      }
    }
  });

  bool first_pp = true;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].ok) {
      check.spray_comparison.skipped += 1;
      if (check.sufficiency) check.sufficiency->skipped += 1;
      if (check.reduction) check.reduction->skipped += 1;
      continue;
    }
    check.spray_comparison.add(points[i], rows[i].cross);
    check.p_per_point.push_back(rows[i].p);
    if (rank1_pair) {
      if (!rows[i].rank1_ok) {
        check.sufficiency->skipped += 1;
        check.reduction->skipped += 1;
        continue;
      }
      check.sufficiency->add(points[i], rows[i].sufficiency);
      check.reduction->add(points[i], rows[i].reduction);
      const double pp_abs = std::abs(rows[i].pp);
      if (first_pp) {
        check.rigidity_min_abs = check.rigidity_max_abs = pp_abs;
        first_pp = false;
      } else {
        check.rigidity_min_abs = std::min(check.rigidity_min_abs, pp_abs);
        check.rigidity_max_abs = std::max(check.rigidity_max_abs, pp_abs);
      }
    }
  }
  check.spray_comparison.finalize();
  if (check.sufficiency) check.sufficiency->finalize();
  if (check.reduction) check.reduction->finalize();
  // The verdict answers "are the sprays projectively related on the sample";
  // the rank-one reports are sufficient-condition diagnostics.
  check.overall = check.spray_comparison.verdict;
  return check;
}

ConformalCheck check_conformal(const MetricSpec& bar, const MetricSpec& tilde,
                               const CheckOptions& opts) {
  ConformalCheck check;
  const int n = bar.dimension();
  const int n_x = std::max(1, opts.samples / std::max(1, opts.y_per_x));
  PointSampler sampler(opts.seed);

  struct XSample {
    Vec x;
    std::vector<Vec> ys;
    std::vector<double> ratios;
  };
  std::vector<XSample> xs;
  for (int ix = 0; ix < n_x; ++ix) {
    XSample s;
    s.x = sampler.vector(n, opts.box.x_lo, opts.box.x_hi);
    for (int iy = 0; iy < opts.y_per_x; ++iy) {
      Vec y = sampler.vector(n, opts.box.y_lo, opts.box.y_hi);
      check.attempted += 1;
      const EvalPoint pt{s.x, y};
      if (!admissibility(bar, pt).ok || !admissibility(tilde, pt).ok) {
        check.skipped += 1;
        continue;
      }
      s.ratios.push_back(metric_value(bar, pt) / metric_value(tilde, pt));
      s.ys.push_back(std::move(y));
    }
    if (s.ratios.size() >= 2) xs.push_back(std::move(s));
  }
  if (xs.empty() || 2 * check.skipped > check.attempted) {
    check.overall = Verdict::inconclusive;
    return check;
  }

  double max_alpha = 0.0;
  for (const XSample& s : xs) {
    double lo = s.ratios[0], hi = s.ratios[0], mean = 0.0;
    for (double r : s.ratios) {
      lo = std::min(lo, r);
      hi = std::max(hi, r);
      mean += r;
    }
    mean /= static_cast<double>(s.ratios.size());
    check.ratio_variation = std::max(check.ratio_variation, (hi - lo) / std::max(1.0, mean));
    const double alpha = std::log(mean);
    check.x_samples.push_back(s.x);
    check.alpha_per_x.push_back(alpha);
    max_alpha = std::max(max_alpha, std::abs(alpha));
  }
  check.is_conformal = check.ratio_variation <= opts.tol;
  check.isometry = max_alpha <= std::max(opts.tol, 1e-12);

  if (check.is_conformal && !check.isometry) {
    // rigidity conclusion: both metrics Riemannian, and g_ij of A^{1/m}
    // reconstructed from the conformal factor and the two B forms.
    check.cartan_bar = 0.0;
    check.cartan_tilde = 0.0;
    const bool shared_a = bar.a() == tilde.a();
    const bool recon_applicable = shared_a;
    if (recon_applicable) check.reconstruction_residual = 0.0;
    const MetricSpec root = MetricSpec::mroot(bar.a(), /*pseudo_finsler_ok=*/true);
    for (size_t ix = 0; ix < xs.size(); ++ix) {
      const XSample& s = xs[ix];
      const double e2a = std::exp(2.0 * check.alpha_per_x[ix]);
      Matrix recon(n);
      bool recon_ok = recon_applicable && std::abs(1.0 - e2a) > 1e-8;
      if (recon_ok) {
        Matrix b_bar =
            bar.b() ? bar.b()->coefficient_matrix(s.x) : Matrix(n);
        Matrix b_tilde =
            tilde.b() ? tilde.b()->coefficient_matrix(s.x) : Matrix(n);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            recon(i, j) = (e2a * b_tilde(i, j) - b_bar(i, j)) / (1.0 - e2a);
      }
      for (const Vec& y : s.ys) {
        const EvalPoint pt{s.x, y};
        check.cartan_bar = std::max(check.cartan_bar, riemannian_score(bar, pt));
        check.cartan_tilde = std::max(check.cartan_tilde, riemannian_score(tilde, pt));
        if (recon_ok) {
          const Matrix g = fundamental_tensor(root, pt);
          double worst = 0.0;
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
              const double scale = std::max({1.0, std::abs(g(i, j)), std::abs(recon(i, j))});
              worst = std::max(worst, std::abs(g(i, j) - recon(i, j)) / scale);
            }
          check.reconstruction_residual = std::max(check.reconstruction_residual, worst);
        }
      }
    }
    const bool conclusions_ok =
        check.cartan_bar <= opts.tol && check.cartan_tilde <= opts.tol &&
        (check.reconstruction_residual < 0.0 || check.reconstruction_residual <= opts.tol);
    check.overall = conclusions_ok ? Verdict::pass : Verdict::fail;
  } else {
    check.overall = check.is_conformal ? Verdict::pass : Verdict::fail;
  }
  return check;
}

}  // namespace verify
}  // namespace finsler
