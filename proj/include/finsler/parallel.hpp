#ifndef FINSLER_PARALLEL_HPP
#define FINSLER_PARALLEL_HPP

#include <cstdlib>
#include <functional>

namespace finsler {

/// True unless FINSLER_NO_PARALLEL=1 is set in the environment.
bool parallel_enabled();

/// Runs fn(0..count-1), fanning out to a small worker pool unless parallel
/// execution is disabled. Callers get determinism by writing results into
/// index-addressed slots and reducing in index order afterwards.
void parallel_for(int count, const std::function<void(int)>& fn);

}  // namespace finsler

#endif
