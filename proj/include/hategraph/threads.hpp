#pragma once

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace hategraph {

// Thread cap from HATEGRAPH_THREADS; defaults to 1 (serial).
inline int thread_count() {
  static int n = [] {
    const char* env = std::getenv("HATEGRAPH_THREADS");
    if (!env) return 1;
    int v = std::atoi(env);
    if (v < 1) return 1;
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    return hw > 0 && v > hw ? hw : v;
  }();
  return n;
}

// Splits [0, n) into contiguous blocks, one per worker. Each index is
// processed exactly once by exactly one worker, so any per-index computation
// whose output slot depends only on the index is schedule-independent.
inline void parallel_for(std::int64_t n,
                         const std::function<void(std::int64_t, std::int64_t)>& body) {
  int workers = thread_count();
  if (workers <= 1 || n < 2048) {
    body(0, n);
    return;
  }
  if (workers > n) workers = static_cast<int>(n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::int64_t chunk = (n + workers - 1) / workers;
  for (int t = 0; t < workers; ++t) {
    std::int64_t lo = t * chunk;
    std::int64_t hi = lo + chunk < n ? lo + chunk : n;
    if (lo >= hi) break;
    pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace hategraph
