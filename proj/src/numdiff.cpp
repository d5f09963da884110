#include "finsler/numdiff.hpp"

#include <cmath>
#include <vector>

namespace finsler {
namespace numdiff {

namespace {

double partial_plain(const ScalarFn& f, std::span<const double> v, int i, double h) {
  std::vector<double> w(v.begin(), v.end());
  w[i] = v[i] + h;
  const double fp = f(w);
  w[i] = v[i] - h;
  const double fm = f(w);
  return (fp - fm) / (2.0 * h);
}

double second_plain(const ScalarFn& f, std::span<const double> v, int i, int j, double h) {
  std::vector<double> w(v.begin(), v.end());
  if (i == j) {
    const double f0 = f(w);
    w[i] = v[i] + h;
    const double fp = f(w);
    w[i] = v[i] - h;
    const double fm = f(w);
    return (fp - 2.0 * f0 + fm) / (h * h);
  }
  double sum = 0.0;
  for (int si = -1; si <= 1; si += 2)
    for (int sj = -1; sj <= 1; sj += 2) {
      w[i] = v[i] + si * h;
      w[j] = v[j] + sj * h;
      sum += si * sj * f(w);
    }
  return sum / (4.0 * h * h);
}

double third_plain(const ScalarFn& f, std::span<const double> v, int i, int j, int k, double h) {
  // nest one central difference along k around the second-derivative stencil
  std::vector<double> w(v.begin(), v.end());
  w[k] = v[k] + h;
  const double dp = second_plain(f, w, i, j, h);
  w[k] = v[k] - h;
  const double dm = second_plain(f, w, i, j, h);
  return (dp - dm) / (2.0 * h);
}

}  // namespace

double partial(const ScalarFn& f, std::span<const double> v, int i, double h) {
  const double d1 = partial_plain(f, v, i, h);
  const double d2 = partial_plain(f, v, i, h / 2.0);
  return (4.0 * d2 - d1) / 3.0;
}

double second(const ScalarFn& f, std::span<const double> v, int i, int j, double h) {
  const double d1 = second_plain(f, v, i, j, h);
  const double d2 = second_plain(f, v, i, j, h / 2.0);
  return (4.0 * d2 - d1) / 3.0;
}

double third(const ScalarFn& f, std::span<const double> v, int i, int j, int k, double h) {
  const double d1 = third_plain(f, v, i, j, k, h);
  const double d2 = third_plain(f, v, i, j, k, h / 2.0);
  return (4.0 * d2 - d1) / 3.0;
}

double scaled_step(std::span<const double> v, int i, double h0) {
  return h0 * std::max(1.0, std::abs(v[i]));
}

}  // namespace numdiff
}  // namespace finsler
