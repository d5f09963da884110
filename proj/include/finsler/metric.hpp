#ifndef FINSLER_METRIC_HPP
#define FINSLER_METRIC_HPP

#include <optional>
#include <string>

#include "finsler/fields.hpp"
#include "finsler/linalg.hpp"

namespace finsler {

enum class MetricKind { mroot, generalized, generalized_rank1 };

/// A metric F = (A^{2/m} + B)^{1/2}, with B = 0 (m-th root), a general
/// quadratic form, or a factored rank-one quadratic form.
class MetricSpec {
public:
  static MetricSpec mroot(SymmetricTensorField a, bool pseudo_finsler_ok = false);
  static MetricSpec generalized(SymmetricTensorField a, QuadraticFormField b,
                                bool pseudo_finsler_ok = false);
  static MetricSpec generalized_rank1(SymmetricTensorField a, RankOneForm form,
                                      bool pseudo_finsler_ok = false);

  MetricKind kind() const { return kind_; }
  int dimension() const { return a_.dimension(); }
  int root_order() const { return a_.order(); }  // m
  bool pseudo_finsler_ok() const { return pseudo_finsler_ok_; }

  const SymmetricTensorField& a() const { return a_; }
  /// Quadratic B-part; absent for m-th root metrics. For rank-one specs this
  /// is the symmetrized (c_i d_j + c_j d_i)/2 collapse.
  const std::optional<QuadraticFormField>& b() const { return b_; }
  const std::optional<RankOneForm>& rank1() const { return rank1_; }

  bool has_b() const { return b_.has_value() && !b_->is_zero(); }

private:
  MetricSpec(MetricKind kind, SymmetricTensorField a, std::optional<QuadraticFormField> b,
             std::optional<RankOneForm> rank1, bool pseudo_finsler_ok);

  MetricKind kind_;
  SymmetricTensorField a_;
  std::optional<QuadraticFormField> b_;
  std::optional<RankOneForm> rank1_;
  bool pseudo_finsler_ok_;
};

struct MetricEval {
  EvalPoint at;
  double a_value = 0.0;
  double b_value = 0.0;
  double f_value = 0.0;
  Matrix g;
  Matrix g_inv;
  Vec y_low;  // y_i = g_ij y^j
  bool positive_definite = false;
  double g_condition = 0.0;
};

/// A and F^2 at the point; ok iff A > 0 and F^2 > 0.
struct Admissibility {
  double a_value;
  double f2_value;
  bool ok;
};

Admissibility admissibility(const MetricSpec& spec, const EvalPoint& pt);

/// F(x, y). Raises InadmissiblePointError outside the domain.
double metric_value(const MetricSpec& spec, const EvalPoint& pt);

/// F^2(x, y) without admissibility enforcement (used by oracles).
double f_squared(const MetricSpec& spec, const EvalPoint& pt);

/// Closed-form fundamental tensor
///   g_ij = A^{2/m-2}/m^2 [m A A_ij + (2-m) A_i A_j] + b_ij.
Matrix fundamental_tensor(const MetricSpec& spec, const EvalPoint& pt);

/// Oracle: one half of the numeric Hessian of F^2 in y (central differences
/// with one Richardson level, step h0 * max(1, |y_i|)).
Matrix hessian_f2_numeric(const MetricSpec& spec, const EvalPoint& pt, double h0 = 1e-4);

/// Closed-form inverse metric for m-th root metrics,
///   g^{ij} = A^{-2/m} [m A A^{ij} + (m-2)/(m-1) y^i y^j].
Matrix inverse_g_mroot(const MetricSpec& spec, const EvalPoint& pt);

/// Full evaluation: F, g, its inverse, lowered y, definiteness. Raises on
/// inadmissible points, singular g, and indefinite g without the
/// pseudo-Finsler flag.
MetricEval evaluate_metric(const MetricSpec& spec, const EvalPoint& pt);

/// Cartan torsion C_ijk = 1/4 d^3 F^2 / dy^i dy^j dy^k, via order-3 jets.
Tensor3 cartan_torsion(const MetricSpec& spec, const EvalPoint& pt);

/// max |C_ijk|; zero exactly for Riemannian metrics.
double riemannian_score(const MetricSpec& spec, const EvalPoint& pt);

}  // namespace finsler

#endif
