#include "finsler/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "finsler/errors.hpp"

namespace finsler {

Polynomial::Polynomial(int dimension) : dim_(dimension) {
  if (dimension < 0) throw InputError("polynomial dimension must be >= 0");
}

Polynomial Polynomial::constant(int dimension, double value) {
  Polynomial p(dimension);
  p.add_term(std::vector<int>(dimension, 0), value);
  return p;
}

Polynomial Polynomial::variable(int dimension, int axis) {
  if (axis < 1 || axis > dimension)
    throw InputError("variable axis " + std::to_string(axis) + " out of range 1.." +
                     std::to_string(dimension));
  Polynomial p(dimension);
  std::vector<int> powers(dimension, 0);
  powers[axis - 1] = 1;
  p.add_term(powers, 1.0);
  return p;
}

int Polynomial::degree() const {
  int deg = -1;
  for (const auto& [powers, value] : terms_) {
    int total = 0;
    for (int e : powers) total += e;
    deg = std::max(deg, total);
  }
  return deg;
}

void Polynomial::add_term(const std::vector<int>& powers, double value) {
  if (static_cast<int>(powers.size()) != dim_)
    throw InputError("monomial power vector length " + std::to_string(powers.size()) +
                     " does not match polynomial dimension " + std::to_string(dim_));
  for (int e : powers)
    if (e < 0) throw InputError("monomial powers must be non-negative");
  if (value == 0.0) return;
  auto it = terms_.find(powers);
  if (it == terms_.end()) {
    terms_.emplace(powers, value);
  } else {
    it->second += value;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double Polynomial::eval(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_)
    throw InputError("eval point length " + std::to_string(x.size()) +
                     " does not match polynomial dimension " + std::to_string(dim_));
  double sum = 0.0;
  for (const auto& [powers, value] : terms_) {
    double term = value;
    for (int i = 0; i < dim_; ++i) {
      for (int k = 0; k < powers[i]; ++k) term *= x[i];
    }
    sum += term;
  }
  return sum;
}

Polynomial Polynomial::diff(int axis) const {
  if (axis < 1 || axis > dim_)
    throw InputError("diff axis " + std::to_string(axis) + " out of range 1.." +
                     std::to_string(dim_));
  Polynomial out(dim_);
  const int i = axis - 1;
  for (const auto& [powers, value] : terms_) {
    if (powers[i] == 0) continue;
    std::vector<int> reduced = powers;
    reduced[i] -= 1;
    out.add_term(reduced, value * powers[i]);
  }
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (dim_ != other.dim_) throw InputError("polynomial dimension mismatch in +");
  for (const auto& [powers, value] : other.terms_) add_term(powers, value);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  if (dim_ != other.dim_) throw InputError("polynomial dimension mismatch in -");
  for (const auto& [powers, value] : other.terms_) add_term(powers, -value);
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [powers, value] : terms_) value *= s;
  return *this;
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  Polynomial out = *this;
  out += other;
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
  Polynomial out = *this;
  out -= other;
  return out;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  if (dim_ != other.dim_) throw InputError("polynomial dimension mismatch in *");
  Polynomial out(dim_);
  std::vector<int> powers(dim_);
  for (const auto& [pa, va] : terms_) {
    for (const auto& [pb, vb] : other.terms_) {
      for (int i = 0; i < dim_; ++i) powers[i] = pa[i] + pb[i];
      out.add_term(powers, va * vb);
    }
  }
  return out;
}

Polynomial Polynomial::operator*(double s) const {
  Polynomial out = *this;
  out *= s;
  return out;
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  out *= -1.0;
  return out;
}

double Polynomial::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [powers, value] : terms_) m = std::max(m, std::abs(value));
  return m;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [powers, value] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << value;
    for (int i = 0; i < dim_; ++i) {
      if (powers[i] == 0) continue;
      os << "*x" << (i + 1);
      if (powers[i] > 1) os << "^" << powers[i];
    }
  }
  return os.str();
}

}  // namespace finsler
