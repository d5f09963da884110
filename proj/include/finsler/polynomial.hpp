#ifndef FINSLER_POLYNOMIAL_HPP
#define FINSLER_POLYNOMIAL_HPP

#include <map>
#include <span>
#include <string>
#include <vector>

namespace finsler {

/// Multivariate polynomial with real coefficients, kept in canonical form:
/// monomials are merged (no duplicate power vectors) and zero coefficients
/// are dropped. Canonical form makes operator== a polynomial-identity test.
///
/// Used both for coefficient fields over x and for forms collapsed to
/// polynomials over y. Axes are 1-based at the API surface.
class Polynomial {
public:
  Polynomial() : dim_(0) {}
  explicit Polynomial(int dimension);

  static Polynomial constant(int dimension, double value);
  /// The monomial x_axis (axis is 1-based).
  static Polynomial variable(int dimension, int axis);

  int dimension() const { return dim_; }
  bool is_zero() const { return terms_.empty(); }
  /// Total degree; -1 for the zero polynomial.
  int degree() const;

  /// Adds value * prod_i x_i^powers[i], merging into canonical form.
  void add_term(const std::vector<int>& powers, double value);

  double eval(std::span<const double> x) const;

  /// Exact formal partial derivative along a 1-based axis.
  Polynomial diff(int axis) const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(double s);
  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator*(const Polynomial& other) const;
  Polynomial operator*(double s) const;
  Polynomial operator-() const;

  bool operator==(const Polynomial& other) const = default;

  /// Largest coefficient magnitude (0 for the zero polynomial).
  double max_abs_coeff() const;

  const std::map<std::vector<int>, double>& monomials() const { return terms_; }

  std::string to_string() const;

private:
  int dim_;
  std::map<std::vector<int>, double> terms_;
};

}  // namespace finsler

#endif
