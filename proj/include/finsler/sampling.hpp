#ifndef FINSLER_SAMPLING_HPP
#define FINSLER_SAMPLING_HPP

#include <cstdint>
#include <random>

#include "finsler/fields.hpp"

namespace finsler {

struct SampleBox {
  double x_lo = -0.25;
  double x_hi = 0.25;
  double y_lo = 0.5;
  double y_hi = 1.5;
};

/// Seeded uniform point source. The raw 64-bit stream is converted to
/// doubles in-house so identical seeds give identical points everywhere.
class PointSampler {
public:
  explicit PointSampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
  }

  Vec vector(int n, double lo, double hi) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = uniform(lo, hi);
    return v;
  }

  EvalPoint point(int n, const SampleBox& box) {
    return {vector(n, box.x_lo, box.x_hi), vector(n, box.y_lo, box.y_hi)};
  }

private:
  std::mt19937_64 rng_;
};

}  // namespace finsler

#endif
