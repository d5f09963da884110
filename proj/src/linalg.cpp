#include "finsler/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "finsler/errors.hpp"

namespace finsler {

namespace {
constexpr double kPivotRel = 1e-12;
constexpr double kRankOneDenom = 1e-12;
}  // namespace

Matrix Matrix::identity(int n) {
  Matrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Vec Matrix::apply(std::span<const double> x) const {
  Vec out(rows_, 0.0);
  for (int i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (int j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
    out[i] = s;
  }
  return out;
}

Matrix Matrix::operator+(const Matrix& other) const {
  Matrix out(rows_, cols_);
  for (size_t k = 0; k < v_.size(); ++k) out.v_[k] = v_[k] + other.v_[k];
  return out;
}

Matrix Matrix::operator-(const Matrix& other) const {
  Matrix out(rows_, cols_);
  for (size_t k = 0; k < v_.size(); ++k) out.v_[k] = v_[k] - other.v_[k];
  return out;
}

Matrix Matrix::operator*(const Matrix& other) const {
  Matrix out(rows_, other.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const double a = (*this)(i, k);
      if (a == 0.0) continue;
      for (int j = 0; j < other.cols_; ++j) out(i, j) += a * other(k, j);
    }
  return out;
}

Matrix Matrix::operator*(double s) const {
  Matrix out = *this;
  for (auto& x : out.v_) x *= s;
  return out;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double x : v_) m = std::max(m, std::abs(x));
  return m;
}

double Matrix::norm1() const {
  double m = 0.0;
  for (int j = 0; j < cols_; ++j) {
    double s = 0.0;
    for (int i = 0; i < rows_; ++i) s += std::abs((*this)(i, j));
    m = std::max(m, s);
  }
  return m;
}

double Tensor3::max_abs() const {
  double m = 0.0;
  for (double x : v_) m = std::max(m, std::abs(x));
  return m;
}

double Tensor4::max_abs() const {
  double m = 0.0;
  for (double x : v_) m = std::max(m, std::abs(x));
  return m;
}

namespace {

struct Lu {
  Matrix lu;
  std::vector<int> perm;
};

Lu lu_factor(const Matrix& a) {
  const int n = a.rows();
  Lu f{a, std::vector<int>(n)};
  const double scale = std::max(a.max_abs(), 1e-300);
  for (int i = 0; i < n; ++i) f.perm[i] = i;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(f.lu(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double v = std::abs(f.lu(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best <= kPivotRel * scale)
      throw SingularMatrixError("matrix is singular to working precision (pivot " +
                                    std::to_string(best) + " at column " + std::to_string(k + 1) +
                                    ")",
                                std::numeric_limits<double>::infinity());
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(piv, j));
      std::swap(f.perm[k], f.perm[piv]);
    }
    for (int i = k + 1; i < n; ++i) {
      f.lu(i, k) /= f.lu(k, k);
      const double m = f.lu(i, k);
      if (m == 0.0) continue;
      for (int j = k + 1; j < n; ++j) f.lu(i, j) -= m * f.lu(k, j);
    }
  }
  return f;
}

Vec lu_solve(const Lu& f, std::span<const double> b) {
  const int n = f.lu.rows();
  Vec x(n);
  for (int i = 0; i < n; ++i) x[i] = b[f.perm[i]];
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j) x[i] -= f.lu(i, j) * x[j];
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) x[i] -= f.lu(i, j) * x[j];
    x[i] /= f.lu(i, i);
  }
  return x;
}

}  // namespace

InverseResult invert_with_condition(const Matrix& a) {
  const int n = a.rows();
  const Lu f = lu_factor(a);
  Matrix inv(n);
  Vec e(n, 0.0);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    const Vec col = lu_solve(f, e);
    e[j] = 0.0;
    for (int i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return {inv, a.norm1() * inv.norm1()};
}

Matrix invert(const Matrix& a) { return invert_with_condition(a).inverse; }

Vec solve(const Matrix& a, std::span<const double> b) { return lu_solve(lu_factor(a), b); }

bool is_positive_definite(const Matrix& a) {
  const int n = a.rows();
  Matrix l(n);
  for (int j = 0; j < n; ++j) {
    double d = a(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) return false;
    l(j, j) = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return true;
}

Matrix rank1_update_inverse(const Matrix& a_inv, std::span<const double> c,
                            std::span<const double> d) {
  const int n = a_inv.rows();
  double denom = 1.0;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) denom += a_inv(p, q) * c[p] * d[q];
  if (std::abs(denom) <= kRankOneDenom)
    throw DegenerateUpdateError(
        "rank-one update is degenerate: 1 + A^{pq} C_p D_q = " + std::to_string(denom), denom);
  // (A^t)^{-1} C and A^{-1} D; for symmetric inputs these coincide with A^{-1} C.
  Vec ac(n, 0.0), ad(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      ac[i] += a_inv(k, i) * c[k];
      ad[i] += a_inv(k, i) * d[k];
    }
  Matrix out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = a_inv(i, j) - ac[i] * ad[j] / denom;
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace finsler
