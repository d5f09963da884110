#ifndef FINSLER_FIELDS_HPP
#define FINSLER_FIELDS_HPP

#include <map>
#include <span>
#include <vector>

#include "finsler/linalg.hpp"
#include "finsler/polynomial.hpp"

namespace finsler {

/// A point (x, y) of the slit tangent bundle. y = 0 is accepted by the
/// polynomial-level operations; metric-level callers enforce admissibility.
struct EvalPoint {
  Vec x;
  Vec y;
};

/// Derivative block of a degree-m form A(x, y) at one point.
///
/// mixed_contracted holds the y-contraction of the mixed second derivatives,
/// sum_k d2A/dx^k dy^l * y^k. (This differs from d(contracted)/dy^l by the
/// x-gradient term; it is the combination every downstream formula consumes.)
struct FormDerivs {
  double value = 0.0;       // A
  Vec grad;                 // dA/dy^i
  Matrix hess;              // d2A/dy^i dy^j
  Vec x_grad;               // dA/dx^l
  double contracted = 0.0;  // sum_k dA/dx^k * y^k
  Vec mixed_contracted;     // sum_k d2A/dx^k dy^l * y^k
};

/// Derivative block of a quadratic form B(x, y) = b_ij(x) y^i y^j.
struct QuadDerivs {
  double value = 0.0;
  Vec grad;                 // dB/dy^i = 2 b_ij y^j
  Matrix hess;              // 2 b_ij
  Vec x_grad;               // dB/dx^l
  double contracted = 0.0;  // sum_k dB/dx^k * y^k
  Vec mixed_contracted;     // sum_k d2B/dx^k dy^l * y^k
};

/// Degree-m symmetric form A(x, y) = a_{i1...im}(x) y^{i1}...y^{im}.
///
/// Terms are stored once per sorted multi-index and hold the monomial
/// coefficient of A viewed as a polynomial in y; the fully symmetric tensor
/// entry is the stored coefficient divided by the multinomial count of the
/// index. Indices are 1-based.
class SymmetricTensorField {
public:
  SymmetricTensorField(int dimension, int order);

  int dimension() const { return dim_; }
  int order() const { return order_; }

  /// Adds coeff(x) * y^{index}. The index may be unsorted; it is canonicalized.
  void add_term(std::vector<int> index, Polynomial coeff);

  const std::map<std::vector<int>, Polynomial>& terms() const { return terms_; }

  /// A as a polynomial in y with numeric coefficients, at frozen x.
  Polynomial y_polynomial(std::span<const double> x) const;
  /// dA/dx^l as a polynomial in y, at frozen x.
  Polynomial y_polynomial_x_derivative(int axis, std::span<const double> x) const;

  double value(const EvalPoint& pt) const;
  Vec grad_y(const EvalPoint& pt) const;
  Matrix hess_y(const EvalPoint& pt) const;
  Tensor3 third_y(const EvalPoint& pt) const;

  /// Everything the metric formulas need at one point, in one pass.
  FormDerivs derivs(const EvalPoint& pt) const;

  bool operator==(const SymmetricTensorField& other) const = default;

private:
  void check_point(const EvalPoint& pt) const;

  int dim_;
  int order_;
  std::map<std::vector<int>, Polynomial> terms_;
};

/// Quadratic form B(x, y) = b_ij(x) y^i y^j with exactly symmetric entries.
class QuadraticFormField {
public:
  explicit QuadraticFormField(int dimension);

  int dimension() const { return dim_; }
  bool is_zero() const;

  /// Sets b_ij and b_ji. Entries set twice must agree exactly.
  void set_entry(int i, int j, Polynomial coeff);
  const Polynomial& entry(int i, int j) const;

  double value(const EvalPoint& pt) const;
  QuadDerivs derivs(const EvalPoint& pt) const;

  /// b_ij evaluated at x.
  Matrix coefficient_matrix(std::span<const double> x) const;

  bool operator==(const QuadraticFormField& other) const = default;

private:
  int dim_;
  std::vector<Polynomial> entries_;  // row-major n*n, kept symmetric
};

/// Factored quadratic form B = c_i(x) d_j(x) y^i y^j with the symmetry
/// c_i d_j = c_j d_i required as a polynomial identity.
class RankOneForm {
public:
  RankOneForm(std::vector<Polynomial> c, std::vector<Polynomial> d);

  int dimension() const { return static_cast<int>(c_.size()); }
  const std::vector<Polynomial>& c() const { return c_; }
  const std::vector<Polynomial>& d() const { return d_; }

  Vec c_at(std::span<const double> x) const;
  Vec d_at(std::span<const double> x) const;

  /// b_ij = (c_i d_j + c_j d_i)/2, which equals c_i d_j under the symmetry
  /// hypothesis.
  QuadraticFormField to_quadratic() const;

  bool operator==(const RankOneForm& other) const = default;

private:
  std::vector<Polynomial> c_, d_;
};

/// Multinomial count of a sorted multi-index: the number of distinct
/// orderings, m! / prod(multiplicities!).
long multinomial_count(std::span<const int> sorted_index);

/// Expands (c . y)^m * coeff(x) into symmetric-tensor terms over n variables.
SymmetricTensorField power_of_linear_form(int dimension, int order, std::span<const double> c,
                                          const Polynomial& coeff);

}  // namespace finsler

#endif
