#pragma once

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace dlab {

/// Worker count: the DISPERSION_LAB_THREADS variable wins over the
/// requested value; 0 means hardware concurrency.
inline unsigned resolve_thread_count(unsigned requested) {
  if (const char *env = std::getenv("DISPERSION_LAB_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return unsigned(v);
    if (v == 0) requested = 0;
  }
  if (requested == 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
  }
  return requested;
}

/// Index-parallel loop with deterministic output: every index writes its
/// own slot, so the reduction order never changes the result.
template <class F>
void parallel_for(std::size_t n, F &&f, unsigned threads) {
  threads = resolve_thread_count(threads);
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) f(i);
    });
  }
  for (auto &th : pool) th.join();
}

} // namespace dlab
