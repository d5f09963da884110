#ifndef FINSLER_JET_HPP
#define FINSLER_JET_HPP

#include <map>
#include <memory>
#include <span>
#include <vector>

#include "finsler/linalg.hpp"
#include "finsler/polynomial.hpp"

namespace finsler {

/// Shared tables for truncated multivariate Taylor arithmetic in a fixed
/// number of variables up to a fixed total order. Multi-indices are
/// enumerated in graded lexicographic order; slot 0 is the constant term.
class JetSpace {
public:
  static std::shared_ptr<const JetSpace> get(int nvars, int order);

  int nvars() const { return nvars_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(exponents_.size()); }

  std::span<const int> exponent(int slot) const {
    return {exponents_[slot].data(), exponents_[slot].size()};
  }
  int slot_of(std::span<const int> alpha) const;
  /// Slot of exponent(a) + exponent(b), or -1 past the truncation order.
  int product_slot(int a, int b) const { return prod_[static_cast<size_t>(a) * size() + b]; }
  int total_degree(int slot) const { return degree_[slot]; }
  /// alpha! for the slot's multi-index.
  double factorial(int slot) const { return factorial_[slot]; }

private:
  JetSpace(int nvars, int order);

  int nvars_, order_;
  std::vector<std::vector<int>> exponents_;
  std::map<std::vector<int>, int> slot_;
  std::vector<int> prod_;
  std::vector<int> degree_;
  std::vector<double> factorial_;
};

/// Truncated multivariate Taylor value: the value of a scalar together with
/// all of its partial derivatives up to the space's order, propagated
/// exactly through arithmetic. Carrier for the spray/curvature pipeline.
class Jet {
public:
  Jet() = default;
  explicit Jet(std::shared_ptr<const JetSpace> space, double constant = 0.0);
  /// Seed for the variable `axis` (1-based) with the given base value.
  static Jet variable(std::shared_ptr<const JetSpace> space, int axis, double value);

  const std::shared_ptr<const JetSpace>& space() const { return space_; }
  double value() const { return c_[0]; }
  double coeff(int slot) const { return c_[slot]; }
  /// Partial derivative for a multi-index (coefficient times alpha!).
  double derivative(std::span<const int> alpha) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator+=(double s);
  Jet& operator-=(double s);
  Jet& operator*=(double s);
  Jet operator+(const Jet& o) const;
  Jet operator-(const Jet& o) const;
  Jet operator*(const Jet& o) const;
  Jet operator*(double s) const;
  Jet operator-() const;

  /// u^r for real r, requiring u's value part to be positive. Exact in the
  /// truncated algebra: u^r = u0^r * sum_k binom(r, k) (u/u0 - 1)^k.
  Jet pow(double r) const;
  Jet sqrt() const { return pow(0.5); }
  Jet reciprocal() const { return pow(-1.0); }
  Jet operator/(const Jet& o) const { return *this * o.reciprocal(); }

private:
  std::shared_ptr<const JetSpace> space_;
  std::vector<double> c_;
};

inline Jet operator*(double s, const Jet& j) { return j * s; }

/// Evaluates a polynomial in the jet variables (exact: all derivatives of a
/// polynomial are reproduced to rounding).
Jet eval_polynomial(const Polynomial& p, std::span<const Jet> vars);

/// Inverse of a square matrix of jets. The value-part matrix is inverted
/// densely; higher orders come from the Neumann series on the perturbation,
/// which terminates at the truncation order.
std::vector<std::vector<Jet>> invert_jet_matrix(const std::vector<std::vector<Jet>>& g);

}  // namespace finsler

#endif
