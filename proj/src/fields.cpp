#include "finsler/fields.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "finsler/errors.hpp"

namespace finsler {

namespace {

std::vector<int> exponents_from_index(std::span<const int> index, int dimension) {
  std::vector<int> e(dimension, 0);
  for (int i : index) e[i - 1] += 1;
  return e;
}

void append_sorted_indices(int dimension, int order, int lowest, std::vector<int>& prefix,
                           std::vector<std::vector<int>>& out) {
  if (static_cast<int>(prefix.size()) == order) {
    out.push_back(prefix);
    return;
  }
  for (int i = lowest; i <= dimension; ++i) {
    prefix.push_back(i);
    append_sorted_indices(dimension, order, i, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

long multinomial_count(std::span<const int> sorted_index) {
  long count = 1;
  long run = 1;
  long pos = 0;
  for (size_t k = 0; k < sorted_index.size(); ++k) {
    ++pos;
    if (k > 0 && sorted_index[k] == sorted_index[k - 1])
      ++run;
    else
      run = 1;
    // multiset permutation count built incrementally: m! / prod(mult!)
    count = count * pos / run;
  }
  return count;
}

SymmetricTensorField::SymmetricTensorField(int dimension, int order)
    : dim_(dimension), order_(order) {
  if (dimension < 1) throw InputError("tensor field dimension must be >= 1");
  if (order < 1) throw InputError("tensor field order must be >= 1");
}

void SymmetricTensorField::add_term(std::vector<int> index, Polynomial coeff) {
  if (static_cast<int>(index.size()) != order_)
    throw InputError("multi-index length " + std::to_string(index.size()) +
                     " does not match tensor order " + std::to_string(order_));
  for (int i : index)
    if (i < 1 || i > dim_)
      throw InputError("multi-index entry " + std::to_string(i) + " out of range 1.." +
                       std::to_string(dim_));
  if (coeff.dimension() != dim_)
    throw InputError("coefficient polynomial dimension does not match tensor dimension");
  std::sort(index.begin(), index.end());
  auto it = terms_.find(index);
  if (it == terms_.end()) {
    if (!coeff.is_zero()) terms_.emplace(std::move(index), std::move(coeff));
  } else {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Polynomial SymmetricTensorField::y_polynomial(std::span<const double> x) const {
  Polynomial p(dim_);
  for (const auto& [index, coeff] : terms_)
    p.add_term(exponents_from_index(index, dim_), coeff.eval(x));
  return p;
}

Polynomial SymmetricTensorField::y_polynomial_x_derivative(int axis,
                                                           std::span<const double> x) const {
  Polynomial p(dim_);
  for (const auto& [index, coeff] : terms_)
    p.add_term(exponents_from_index(index, dim_), coeff.diff(axis).eval(x));
  return p;
}

void SymmetricTensorField::check_point(const EvalPoint& pt) const {
  if (static_cast<int>(pt.x.size()) != dim_ || static_cast<int>(pt.y.size()) != dim_)
    throw InputError("evaluation point dimension does not match tensor field dimension " +
                     std::to_string(dim_));
}

double SymmetricTensorField::value(const EvalPoint& pt) const {
  check_point(pt);
  return y_polynomial(pt.x).eval(pt.y);
}

Vec SymmetricTensorField::grad_y(const EvalPoint& pt) const {
  check_point(pt);
  const Polynomial p = y_polynomial(pt.x);
  Vec g(dim_);
  for (int i = 1; i <= dim_; ++i) g[i - 1] = p.diff(i).eval(pt.y);
  return g;
}

Matrix SymmetricTensorField::hess_y(const EvalPoint& pt) const {
  check_point(pt);
  const Polynomial p = y_polynomial(pt.x);
  Matrix h(dim_);
  for (int i = 1; i <= dim_; ++i) {
    const Polynomial pi = p.diff(i);
    for (int j = i; j <= dim_; ++j) {
      const double v = pi.diff(j).eval(pt.y);
      h(i - 1, j - 1) = v;
      h(j - 1, i - 1) = v;
    }
  }
  return h;
}

Tensor3 SymmetricTensorField::third_y(const EvalPoint& pt) const {
  check_point(pt);
  const Polynomial p = y_polynomial(pt.x);
  Tensor3 t(dim_);
  for (int i = 1; i <= dim_; ++i) {
    const Polynomial pi = p.diff(i);
    for (int j = i; j <= dim_; ++j) {
      const Polynomial pij = pi.diff(j);
      for (int k = j; k <= dim_; ++k) {
        const double v = pij.diff(k).eval(pt.y);
        // fully symmetric: fill all permutations of (i, j, k)
        int idx[3] = {i - 1, j - 1, k - 1};
        std::sort(idx, idx + 3);
        do {
          t.at(idx[0], idx[1], idx[2]) = v;
        } while (std::next_permutation(idx, idx + 3));
      }
    }
  }
  return t;
}

FormDerivs SymmetricTensorField::derivs(const EvalPoint& pt) const {
  check_point(pt);
  FormDerivs d;
  const Polynomial p = y_polynomial(pt.x);
  d.value = p.eval(pt.y);
  d.grad.resize(dim_);
  d.hess = Matrix(dim_);
  for (int i = 1; i <= dim_; ++i) {
    const Polynomial pi = p.diff(i);
    d.grad[i - 1] = pi.eval(pt.y);
    for (int j = i; j <= dim_; ++j) {
      const double v = pi.diff(j).eval(pt.y);
      d.hess(i - 1, j - 1) = v;
      d.hess(j - 1, i - 1) = v;
    }
  }
  d.x_grad.assign(dim_, 0.0);
  d.mixed_contracted.assign(dim_, 0.0);
  d.contracted = 0.0;
  for (int k = 1; k <= dim_; ++k) {
    const Polynomial pk = y_polynomial_x_derivative(k, pt.x);
    if (pk.is_zero()) continue;
    d.x_grad[k - 1] = pk.eval(pt.y);
    d.contracted += d.x_grad[k - 1] * pt.y[k - 1];
    for (int l = 1; l <= dim_; ++l)
      d.mixed_contracted[l - 1] += pk.diff(l).eval(pt.y) * pt.y[k - 1];
  }
  return d;
}

QuadraticFormField::QuadraticFormField(int dimension)
    : dim_(dimension),
      entries_(static_cast<size_t>(dimension) * dimension, Polynomial(dimension)) {
  if (dimension < 1) throw InputError("quadratic form dimension must be >= 1");
}

bool QuadraticFormField::is_zero() const {
  for (const auto& p : entries_)
    if (!p.is_zero()) return false;
  return true;
}

void QuadraticFormField::set_entry(int i, int j, Polynomial coeff) {
  if (i < 1 || i > dim_ || j < 1 || j > dim_)
    throw InputError("quadratic form index out of range 1.." + std::to_string(dim_));
  if (coeff.dimension() != dim_)
    throw InputError("quadratic form entry polynomial dimension mismatch");
  entries_[static_cast<size_t>(i - 1) * dim_ + (j - 1)] = coeff;
  entries_[static_cast<size_t>(j - 1) * dim_ + (i - 1)] = std::move(coeff);
}

const Polynomial& QuadraticFormField::entry(int i, int j) const {
  return entries_[static_cast<size_t>(i - 1) * dim_ + (j - 1)];
}

double QuadraticFormField::value(const EvalPoint& pt) const {
  double s = 0.0;
  for (int i = 1; i <= dim_; ++i)
    for (int j = 1; j <= dim_; ++j) s += entry(i, j).eval(pt.x) * pt.y[i - 1] * pt.y[j - 1];
  return s;
}

Matrix QuadraticFormField::coefficient_matrix(std::span<const double> x) const {
  Matrix b(dim_);
  for (int i = 1; i <= dim_; ++i)
    for (int j = 1; j <= dim_; ++j) b(i - 1, j - 1) = entry(i, j).eval(x);
  return b;
}

QuadDerivs QuadraticFormField::derivs(const EvalPoint& pt) const {
  if (static_cast<int>(pt.x.size()) != dim_ || static_cast<int>(pt.y.size()) != dim_)
    throw InputError("evaluation point dimension does not match quadratic form dimension");
  QuadDerivs d;
  const Matrix b = coefficient_matrix(pt.x);
  d.hess = b * 2.0;
  d.grad = d.hess.apply(pt.y);
  d.value = 0.5 * dot(d.grad, pt.y);
  d.x_grad.assign(dim_, 0.0);
  d.mixed_contracted.assign(dim_, 0.0);
  for (int k = 1; k <= dim_; ++k) {
    Matrix bk(dim_);
    bool any = false;
    for (int i = 1; i <= dim_; ++i)
      for (int j = 1; j <= dim_; ++j) {
        const Polynomial pd = entry(i, j).diff(k);
        if (!pd.is_zero()) {
          bk(i - 1, j - 1) = pd.eval(pt.x);
          any = true;
        }
      }
    if (!any) continue;
    const Vec bky = bk.apply(pt.y);
    d.x_grad[k - 1] = dot(bky, pt.y);
    d.contracted += d.x_grad[k - 1] * pt.y[k - 1];
    for (int l = 0; l < dim_; ++l) d.mixed_contracted[l] += 2.0 * bky[l] * pt.y[k - 1];
  }
  return d;
}

RankOneForm::RankOneForm(std::vector<Polynomial> c, std::vector<Polynomial> d)
    : c_(std::move(c)), d_(std::move(d)) {
  if (c_.empty() || c_.size() != d_.size())
    throw InputError("rank-one form requires covectors c, d of equal positive length");
  const int n = static_cast<int>(c_.size());
  for (const auto& p : c_)
    if (p.dimension() != n) throw InputError("rank-one form c entry has wrong dimension");
  for (const auto& p : d_)
    if (p.dimension() != n) throw InputError("rank-one form d entry has wrong dimension");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Polynomial lhs = c_[i] * d_[j];
      const Polynomial rhs = c_[j] * d_[i];
      const Polynomial residual = lhs - rhs;
      const double scale = std::max({1.0, lhs.max_abs_coeff(), rhs.max_abs_coeff()});
      if (residual.max_abs_coeff() > 1e-12 * scale)
        throw InputError("rank-one form violates c_i d_j = c_j d_i at (i, j) = (" +
                         std::to_string(i + 1) + ", " + std::to_string(j + 1) + ")");
    }
}

Vec RankOneForm::c_at(std::span<const double> x) const {
  Vec v(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) v[i] = c_[i].eval(x);
  return v;
}

Vec RankOneForm::d_at(std::span<const double> x) const {
  Vec v(d_.size());
  for (size_t i = 0; i < d_.size(); ++i) v[i] = d_[i].eval(x);
  return v;
}

QuadraticFormField RankOneForm::to_quadratic() const {
  const int n = dimension();
  QuadraticFormField q(n);
  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= n; ++j)
      q.set_entry(i, j, (c_[i - 1] * d_[j - 1] + c_[j - 1] * d_[i - 1]) * 0.5);
  return q;
}

SymmetricTensorField power_of_linear_form(int dimension, int order, std::span<const double> c,
                                          const Polynomial& coeff) {
  SymmetricTensorField t(dimension, order);
  std::vector<std::vector<int>> indices;
  std::vector<int> prefix;
  append_sorted_indices(dimension, order, 1, prefix, indices);
  for (const auto& index : indices) {
    double w = static_cast<double>(multinomial_count(index));
    for (int i : index) w *= c[i - 1];
    if (w != 0.0) t.add_term(index, coeff * w);
  }
  return t;
}

}  // namespace finsler
