#ifndef FINSLER_LINALG_HPP
#define FINSLER_LINALG_HPP

#include <span>
#include <vector>

namespace finsler {

using Vec = std::vector<double>;

/// Dense row-major matrix. Indices are 0-based internally; all user-facing
/// I/O converts to 1-based labels.
class Matrix {
public:
  Matrix() : rows_(0), cols_(0) {}
  explicit Matrix(int n) : rows_(n), cols_(n), v_(static_cast<size_t>(n) * n, 0.0) {}
  Matrix(int rows, int cols)
      : rows_(rows), cols_(cols), v_(static_cast<size_t>(rows) * cols, 0.0) {}

  static Matrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) { return v_[static_cast<size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return v_[static_cast<size_t>(i) * cols_ + j]; }

  Vec apply(std::span<const double> x) const;

  Matrix operator+(const Matrix& other) const;
  Matrix operator-(const Matrix& other) const;
  Matrix operator*(const Matrix& other) const;
  Matrix operator*(double s) const;

  double max_abs() const;
  /// Maximum absolute column sum.
  double norm1() const;

private:
  int rows_, cols_;
  std::vector<double> v_;
};

/// Dense order-3 array, n x n x n.
class Tensor3 {
public:
  Tensor3() : n_(0) {}
  explicit Tensor3(int n) : n_(n), v_(static_cast<size_t>(n) * n * n, 0.0) {}
  int dim() const { return n_; }
  double& at(int i, int j, int k) { return v_[(static_cast<size_t>(i) * n_ + j) * n_ + k]; }
  double at(int i, int j, int k) const { return v_[(static_cast<size_t>(i) * n_ + j) * n_ + k]; }
  double max_abs() const;

private:
  int n_;
  std::vector<double> v_;
};

/// Dense order-4 array, n x n x n x n.
class Tensor4 {
public:
  Tensor4() : n_(0) {}
  explicit Tensor4(int n) : n_(n), v_(static_cast<size_t>(n) * n * n * n, 0.0) {}
  int dim() const { return n_; }
  double& at(int i, int j, int k, int l) {
    return v_[((static_cast<size_t>(i) * n_ + j) * n_ + k) * n_ + l];
  }
  double at(int i, int j, int k, int l) const {
    return v_[((static_cast<size_t>(i) * n_ + j) * n_ + k) * n_ + l];
  }
  double max_abs() const;

private:
  int n_;
  std::vector<double> v_;
};

struct InverseResult {
  Matrix inverse;
  double condition;  // 1-norm condition estimate
};

/// Dense inverse via LU with partial pivoting. A pivot below
/// 1e-12 * max|a_ij| raises SingularMatrixError.
InverseResult invert_with_condition(const Matrix& a);
Matrix invert(const Matrix& a);

Vec solve(const Matrix& a, std::span<const double> b);

/// Cholesky probe; true iff the symmetric matrix is positive definite.
bool is_positive_definite(const Matrix& a);

/// Inverse of (A_ij + C_i D_j) from the inverse of A, valid for symmetric
/// rank-one updates (C_i D_j = C_j D_i). Raises DegenerateUpdateError when
/// |1 + A^{pq} C_p D_q| <= 1e-12.
Matrix rank1_update_inverse(const Matrix& a_inv, std::span<const double> c,
                            std::span<const double> d);

double dot(std::span<const double> a, std::span<const double> b);
double max_abs(std::span<const double> a);

}  // namespace finsler

#endif
