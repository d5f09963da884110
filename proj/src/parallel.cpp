#include "finsler/parallel.hpp"

#include <algorithm>
#include <exception>
#include <future>
#include <thread>
#include <vector>

namespace finsler {

bool parallel_enabled() {
  const char* v = std::getenv("FINSLER_NO_PARALLEL");
  return !(v != nullptr && v[0] == '1');
}

void parallel_for(int count, const std::function<void(int)>& fn) {
  if (count <= 0) return;
  // at least two workers so the pool path is exercised on single-core hosts
  const unsigned hw = std::max(2u, std::thread::hardware_concurrency());
  const int workers = static_cast<int>(std::min<unsigned>(hw, 8));
  if (!parallel_enabled() || count == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::future<void>> futures;
  futures.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    futures.push_back(std::async(std::launch::async, [&fn, count, workers, w] {
      for (int i = w; i < count; i += workers) fn(i);
    }));
  }
  std::exception_ptr first_error;
  for (auto& f : futures) {
    try {
      f.get();
    } catch (...) {
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace finsler
