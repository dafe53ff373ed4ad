#pragma once

// Deterministic chunked parallelism for pure verification scans.  Results
// never depend on the worker count: chunks are static and contiguous, and
// callers merge per-chunk results in index order.

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace stiler {

// Worker count; the SCOTT_TILER_THREADS environment variable overrides the
// hardware default (clamped to [1, 256], anything unparsable is ignored).
inline unsigned thread_count() {
  static const unsigned n = [] {
    if (const char* env = std::getenv("SCOTT_TILER_THREADS")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end != env && end && *end == '\0' && v >= 1) {
        return static_cast<unsigned>(std::min(v, 256L));
      }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1u;
  }();
  return n;
}

// f(i) for i in [0, n), split into one contiguous chunk per worker.  f must
// not write shared state except at its own index.
template <typename F>
void parallel_for(std::size_t n, F&& f) {
  const std::size_t T = std::min<std::size_t>(thread_count(), n ? n : 1);
  if (T <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  const std::size_t chunk = (n + T - 1) / T;
  std::vector<std::thread> pool;
  pool.reserve(T);
  for (std::size_t t = 0; t < T; ++t) {
    const std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&f, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) f(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace stiler
