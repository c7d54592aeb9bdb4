#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace pf {

// Process-wide worker cap for parallel_for; 1 means fully sequential (the
// --deterministic CLI mode). Results do not depend on the setting because
// every parallel loop writes only its own output slot and each slot's
// internal reduction order is fixed.
inline int& max_threads() {
  static int n = 1;
  return n;
}

template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  int workers = std::max(1, max_threads());
  if (n > 0) workers = std::min<std::size_t>(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / static_cast<std::size_t>(workers);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int t = 0; t < workers; ++t) {
    const std::size_t lo = static_cast<std::size_t>(t) * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&fn, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace pf
