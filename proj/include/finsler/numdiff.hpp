#ifndef FINSLER_NUMDIFF_HPP
#define FINSLER_NUMDIFF_HPP

#include <functional>
#include <span>

#include "finsler/linalg.hpp"

namespace finsler {
namespace numdiff {

using ScalarFn = std::function<double(std::span<const double>)>;

/// Central differences with one Richardson extrapolation level throughout
/// (leading error O(h^4)). Axes are 0-based here; this is the universal
/// independent oracle against the closed-form/jet differentiation path.

double partial(const ScalarFn& f, std::span<const double> v, int i, double h);
double second(const ScalarFn& f, std::span<const double> v, int i, int j, double h);
double third(const ScalarFn& f, std::span<const double> v, int i, int j, int k, double h);

/// Step scaled to the coordinate magnitude: h0 * max(1, |v_i|).
double scaled_step(std::span<const double> v, int i, double h0);

}  // namespace numdiff
}  // namespace finsler

#endif
