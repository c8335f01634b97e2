// parallel.hpp — bounded trial parallelism with deterministic collection.
#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace spikebasin {

// Worker cap: SPIKEBASIN_THREADS env var if set, else hardware concurrency.
inline int max_threads() {
  if (const char* env = std::getenv("SPIKEBASIN_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(i) for i in [0, n). Each call writes only to its own slot, so the
// result order (and any later reduction over it) is independent of the
// schedule.
template <class Fn>
void parallel_trials(int n, Fn&& fn) {
  const int workers = std::min(max_threads(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace spikebasin
