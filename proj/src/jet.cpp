#include "finsler/jet.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include "finsler/errors.hpp"

namespace finsler {

namespace {

void enumerate_graded(int nvars, int order, std::vector<std::vector<int>>& out) {
  // graded lexicographic: by total degree, then lexicographic
  std::vector<int> alpha(nvars, 0);
  for (int deg = 0; deg <= order; ++deg) {
    // enumerate compositions of deg into nvars parts, lexicographically
    std::fill(alpha.begin(), alpha.end(), 0);
    alpha[nvars - 1] = deg;
    while (true) {
      std::vector<int> rev(alpha.rbegin(), alpha.rend());
      out.push_back(rev);
      // next composition
      int k = nvars - 1;
      while (k >= 0 && alpha[k] == 0) --k;
      if (k <= 0) break;
      const int carry = alpha[k];
      alpha[k] = 0;
      alpha[k - 1] += 1;
      alpha[nvars - 1] = carry - 1;
    }
  }
}

}  // namespace

JetSpace::JetSpace(int nvars, int order) : nvars_(nvars), order_(order) {
  if (nvars < 1) throw InputError("jet space needs at least one variable");
  if (order < 0 || order > 8) throw InputError("jet order out of supported range 0..8");
  enumerate_graded(nvars, order, exponents_);
  const int n = size();
  degree_.resize(n);
  factorial_.resize(n);
  for (int s = 0; s < n; ++s) {
    slot_[exponents_[s]] = s;
    int deg = 0;
    double fact = 1.0;
    for (int e : exponents_[s]) {
      deg += e;
      for (int k = 2; k <= e; ++k) fact *= k;
    }
    degree_[s] = deg;
    factorial_[s] = fact;
  }
  prod_.assign(static_cast<size_t>(n) * n, -1);
  std::vector<int> sum(nvars);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (degree_[a] + degree_[b] > order) continue;
      for (int i = 0; i < nvars; ++i) sum[i] = exponents_[a][i] + exponents_[b][i];
      prod_[static_cast<size_t>(a) * n + b] = slot_.at(sum);
    }
}

std::shared_ptr<const JetSpace> JetSpace::get(int nvars, int order) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const JetSpace>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& entry = cache[{nvars, order}];
  if (!entry) entry = std::shared_ptr<const JetSpace>(new JetSpace(nvars, order));
  return entry;
}

int JetSpace::slot_of(std::span<const int> alpha) const {
  auto it = slot_.find(std::vector<int>(alpha.begin(), alpha.end()));
  return it == slot_.end() ? -1 : it->second;
}

Jet::Jet(std::shared_ptr<const JetSpace> space, double constant) : space_(std::move(space)) {
  c_.assign(space_->size(), 0.0);
  c_[0] = constant;
}

Jet Jet::variable(std::shared_ptr<const JetSpace> space, int axis, double value) {
  if (axis < 1 || axis > space->nvars())
    throw InputError("jet variable axis out of range 1.." + std::to_string(space->nvars()));
  Jet j(space, value);
  if (space->order() >= 1) {
    std::vector<int> alpha(space->nvars(), 0);
    alpha[axis - 1] = 1;
    j.c_[space->slot_of(alpha)] = 1.0;
  }
  return j;
}

double Jet::derivative(std::span<const int> alpha) const {
  const int slot = space_->slot_of(alpha);
  if (slot < 0) throw InputError("requested derivative exceeds jet order");
  return c_[slot] * space_->factorial(slot);
}

Jet& Jet::operator+=(const Jet& o) {
  for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Jet& Jet::operator+=(double s) {
  c_[0] += s;
  return *this;
}

Jet& Jet::operator-=(double s) {
  c_[0] -= s;
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (double& x : c_) x *= s;
  return *this;
}

Jet Jet::operator+(const Jet& o) const {
  Jet out = *this;
  out += o;
  return out;
}

Jet Jet::operator-(const Jet& o) const {
  Jet out = *this;
  out -= o;
  return out;
}

Jet Jet::operator*(const Jet& o) const {
  const JetSpace& sp = *space_;
  Jet out(space_);
  const int n = sp.size();
  for (int a = 0; a < n; ++a) {
    const double ca = c_[a];
    if (ca == 0.0) continue;
    for (int b = 0; b < n; ++b) {
      const int s = sp.product_slot(a, b);
      if (s < 0) continue;
      out.c_[s] += ca * o.c_[b];
    }
  }
  return out;
}

Jet Jet::operator*(double s) const {
  Jet out = *this;
  out *= s;
  return out;
}

Jet Jet::operator-() const {
  Jet out = *this;
  out *= -1.0;
  return out;
}

Jet Jet::pow(double r) const {
  const double u0 = c_[0];
  const bool integer_exponent = r == std::floor(r);
  if (!(u0 > 0.0) && !(integer_exponent && u0 != 0.0))
    throw InadmissiblePointError("jet pow requires a positive value part, got " +
                                     std::to_string(u0),
                                 u0, u0);
  const int order = space_->order();
  Jet s = *this * (1.0 / u0);
  s.c_[0] = 0.0;  // pure part of u/u0
  // binomial series sum_k C(r,k) s^k, exact since s^k starts at order k
  Jet acc(space_, 1.0);
  double coeff = 1.0;
  Jet spow(space_, 1.0);
  for (int k = 1; k <= order; ++k) {
    coeff *= (r - (k - 1)) / k;
    spow = spow * s;
    acc += spow * coeff;
  }
  return acc * std::pow(u0, r);
}

Jet eval_polynomial(const Polynomial& p, std::span<const Jet> vars) {
  const auto space = vars.empty() ? nullptr : vars[0].space();
  if (!space) throw InputError("eval_polynomial needs at least one jet variable");
  // power tables per variable, built lazily up to the max exponent used
  std::vector<std::vector<Jet>> powers(vars.size());
  for (size_t i = 0; i < vars.size(); ++i) powers[i].push_back(Jet(space, 1.0));
  Jet out(space, 0.0);
  for (const auto& [exps, value] : p.monomials()) {
    Jet term(space, value);
    for (size_t i = 0; i < vars.size(); ++i) {
      const int e = exps[i];
      while (static_cast<int>(powers[i].size()) <= e)
        powers[i].push_back(powers[i].back() * vars[i]);
      if (e > 0) term = term * powers[i][e];
    }
    out += term;
  }
  return out;
}

std::vector<std::vector<Jet>> invert_jet_matrix(const std::vector<std::vector<Jet>>& g) {
  const int n = static_cast<int>(g.size());
  const auto space = g[0][0].space();
  Matrix g0(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g0(i, j) = g[i][j].value();
  const Matrix inv0 = invert(g0);

  auto zero_matrix = [&] {
    return std::vector<std::vector<Jet>>(n, std::vector<Jet>(n, Jet(space, 0.0)));
  };
  // M = -inv0 * (g - g0): pure part only, so M^k dies past the jet order
  auto m = zero_matrix();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet s(space, 0.0);
      for (int k = 0; k < n; ++k) {
        Jet pure = g[k][j];
        pure -= g[k][j].value();
        s += pure * (-inv0(i, k));
      }
      m[i][j] = s;
    }

  // (I + M + M^2 + ... + M^order) * inv0
  auto series = zero_matrix();
  for (int i = 0; i < n; ++i) series[i][i] = Jet(space, 1.0);
  auto mpow = m;
  for (int k = 1; k <= space->order(); ++k) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) series[i][j] += mpow[i][j];
    if (k < space->order()) {
      auto next = zero_matrix();
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Jet s(space, 0.0);
          for (int l = 0; l < n; ++l) s += mpow[i][l] * m[l][j];
          next[i][j] = s;
        }
      mpow = std::move(next);
    }
  }
  auto out = zero_matrix();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet s(space, 0.0);
      for (int l = 0; l < n; ++l) s += series[i][l] * inv0(l, j);
      out[i][j] = s;
    }
  return out;
}

}  // namespace finsler
