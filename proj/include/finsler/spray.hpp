#ifndef FINSLER_SPRAY_HPP
#define FINSLER_SPRAY_HPP

#include <string>
#include <vector>

#include "finsler/metric.hpp"

namespace finsler {

/// The two covectors of the dual-flatness identity:
///   lhs_l = (F^2)_{x^k y^l} y^k,   rhs_l = (F^2)_{x^l}.
/// Local dual flatness is lhs = 2 rhs; the spray uses lhs - rhs.
struct DualFlatForms {
  Vec lhs;
  Vec rhs;
};

DualFlatForms dual_flat_forms(const MetricSpec& spec, const EvalPoint& pt);

/// Spray coefficients G^i = 1/4 g^{il} (lhs_l - rhs_l).
Vec spray_coefficients(const MetricSpec& spec, const EvalPoint& pt);

struct SprayEval {
  EvalPoint at;
  Vec g_coeffs;               // G^i
  Tensor4 berwald;            // B^i_jkl = d^3 G^i / dy^j dy^k dy^l
  Matrix mean_berwald;        // E_jk = 1/2 B^m_jkm
  Tensor3 mean_berwald_grad;  // E_{jk,l} (filled when douglas is requested)
  Tensor4 douglas;            // D^i_jkl (filled when requested)
  bool has_douglas = false;
};

/// Jet-based evaluation of the spray and its y-derivative curvatures at one
/// point. Douglas needs order-4 jets; without it order 3 suffices.
SprayEval spray_eval(const MetricSpec& spec, const EvalPoint& pt, bool with_douglas = true);

Tensor4 berwald_curvature(const MetricSpec& spec, const EvalPoint& pt);
Matrix mean_berwald(const MetricSpec& spec, const EvalPoint& pt);
Tensor4 douglas_curvature(const MetricSpec& spec, const EvalPoint& pt);

struct GeodesicTrace {
  std::vector<double> times;
  std::vector<Vec> positions;
  std::vector<Vec> velocities;
  std::vector<double> f_values;
  double energy_drift = 0.0;  // max |F(t) - F(0)| over the trace
  bool completed = false;
  std::string stop_reason;  // set when the trace was truncated
};

/// Classical fixed-step RK4 for xdd^i + 2 G^i(x, xd) = 0. The trace is
/// truncated (not an error) if it reaches an inadmissible region.
GeodesicTrace geodesic_integrate(const MetricSpec& spec, const Vec& x0, const Vec& y0,
                                 double t_end, double step);

}  // namespace finsler

#endif
