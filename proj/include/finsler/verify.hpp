#ifndef FINSLER_VERIFY_HPP
#define FINSLER_VERIFY_HPP

#include <optional>
#include <string>
#include <vector>

#include "finsler/metric.hpp"
#include "finsler/sampling.hpp"
#include "finsler/spray.hpp"

namespace finsler {
namespace verify {

enum class Verdict { pass, fail, inconclusive };
std::string to_string(Verdict v);

/// Which metric raises d^k in the rank-one projective machinery: the root
/// metric g of F = A^{1/m} (default) or the generalized metric gbar.
enum class RaisingMetric { root, generalized };

struct PointResidual {
  EvalPoint at;
  double residual;  // scale-normalized
};

struct ResidualReport {
  std::string name;
  std::vector<PointResidual> per_point;
  double max_residual = 0.0;
  int worst_index = -1;
  double tolerance = 0.0;
  int attempted = 0;
  int skipped = 0;  // points where preconditions failed
  Verdict verdict = Verdict::inconclusive;

  void add(const EvalPoint& at, double residual);
  /// pass iff max <= tol; inconclusive when preconditions failed at more
  /// than half of the attempted points (or nothing was evaluated).
  void finalize();
};

/// max_l |u_l - v_l| / max(1, |u_l|, |v_l|)
double compare_covectors(std::span<const double> u, std::span<const double> v);

// ---- point-level residuals -------------------------------------------------

/// R_l = (F^2)_{x^k y^l} y^k - 2 (F^2)_{x^l}; zero iff locally dually flat
/// at the point in the given coordinates.
Vec dual_flat_residual(const MetricSpec& spec, const EvalPoint& pt);

/// Residual of the coefficient form of the dual-flatness identity,
///   A_{x^l} = 1/(2A) [ (2/m-1) A_0 A_l + A A_{0l}
///                      + m/2 A^{(2m-2)/m} (B_{0l} - 2 B_{x^l}) ].
Vec coefficient_flatness_residual(const MetricSpec& spec, const EvalPoint& pt);

/// Delta_k = A^{2/m-2}/m [ (2/m-1) A_k A_0 + A A_{0k} - A A_{x^k} ], for
/// m-th root specs; 2 Delta_k = lhs_k - rhs_k of dual_flat_forms.
Vec delta_k(const MetricSpec& spec, const EvalPoint& pt);

/// Residual of (1 + c_k d^k) A^{ij} (B_{0j} - B_{x^j})
///            - d^k [2 Delta_k + (B_{0k} - B_{x^k})] A^{ij} c_j.
Vec projective_sufficiency_residual(const MetricSpec& bar, const MetricSpec& base,
                                    const EvalPoint& pt,
                                    RaisingMetric interp = RaisingMetric::root);

/// Residual of m A^{(m-2)/m} A^{il} frakB_l - [4 Upsilon + k d^l frakB_l] calA^i.
Vec spray_reduction_residual(const MetricSpec& bar, const MetricSpec& base, const EvalPoint& pt,
                             RaisingMetric interp = RaisingMetric::root);

/// Value of 2 A^{2/m-2} d^i c_i d^j [(2/m-1) A_j A_0 + A A_{0j} - A A_{x^j}]
///          - m d^i [B_{0i} - B_{x^i}].
double rigidity_scalar(const MetricSpec& bar, const MetricSpec& base, const EvalPoint& pt,
                       RaisingMetric interp = RaisingMetric::root);

/// Diagnostic residuals of the rational/irrational split behind the
/// rigidity argument; no verdict attached.
struct RigiditySplits {
  Vec rational_part;
  Vec irrational_part;
  Vec contracted_rational;
  Vec contracted_irrational;
};
RigiditySplits rigidity_splits(const MetricSpec& bar, const MetricSpec& base,
                               const EvalPoint& pt,
                               RaisingMetric interp = RaisingMetric::root);

struct ProjectivePoint {
  bool is_projective;
  double p;               // projective factor from least squares of Delta^i on y^i
  double cross_residual;  // max_{i<j} |Delta^i y^j - Delta^j y^i|, scale-normalized
};
ProjectivePoint projective_check(const MetricSpec& first, const MetricSpec& second,
                                 const EvalPoint& pt, double tol = 1e-8);

// ---- sampled checks ---------------------------------------------------------

struct CheckOptions {
  int samples = 200;
  int y_per_x = 20;  // y-directions per x for per-x checks
  SampleBox box;
  std::uint64_t seed = 42;
  double tol = 1e-8;
  RaisingMetric interp = RaisingMetric::root;
  bool irreducible_asserted = false;
};

struct ThetaRecovery {
  std::vector<Vec> x_samples;
  std::vector<Vec> theta_per_x;      // theta_l(x), averaged over y-directions
  double linearity_residual = 0.0;   // max variation of theta_l across y at fixed x
};

struct FlatnessConditions {
  ResidualReport b_condition;
  ThetaRecovery theta;
  ResidualReport theta_condition;
  bool irreducibility_asserted = false;
};

/// B-condition residual, theta recovery (theta = A_0/A, theta_l by order-1
/// jets), and theta-condition residual over an x-sample with y-directions
/// per x.
FlatnessConditions flatness_conditions_check(const MetricSpec& spec, const CheckOptions& opts);

struct DualFlatCheck {
  ResidualReport definition;
  ResidualReport coefficient_form;
  std::optional<FlatnessConditions> conditions;
  Verdict overall = Verdict::inconclusive;
};
DualFlatCheck check_dual_flat(const MetricSpec& spec, const CheckOptions& opts);

struct ProjectiveCheck {
  ResidualReport spray_comparison;
  Vec p_per_point;
  std::optional<ResidualReport> sufficiency;
  std::optional<ResidualReport> reduction;
  bool rigidity_available = false;
  double rigidity_min_abs = 0.0;
  double rigidity_max_abs = 0.0;
  Verdict overall = Verdict::inconclusive;
};
/// Spray-comparison check for any pair; rank-one sufficiency residuals
/// when (bar, base) is a rank-one pair over the same A.
ProjectiveCheck check_projective(const MetricSpec& bar, const MetricSpec& base,
                                 const CheckOptions& opts);

struct ConformalCheck {
  bool is_conformal = false;
  bool isometry = false;
  double ratio_variation = 0.0;  // worst per-x spread of Fbar/Ftilde across y
  std::vector<Vec> x_samples;
  std::vector<double> alpha_per_x;
  // rigidity conclusions, evaluated when conformal and not an isometry:
  double cartan_bar = -1.0;
  double cartan_tilde = -1.0;
  double reconstruction_residual = -1.0;  // g_ij vs the B-form reconstruction; -1 if n/a
  int attempted = 0;
  int skipped = 0;
  Verdict overall = Verdict::inconclusive;
};
ConformalCheck check_conformal(const MetricSpec& bar, const MetricSpec& tilde,
                               const CheckOptions& opts);

}  // namespace verify
}  // namespace finsler

#endif
