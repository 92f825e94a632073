#pragma once
// Minimal fork-join loop; PSIEC_THREADS caps the worker count.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace psiec {

inline int worker_count() {
  int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* e = std::getenv("PSIEC_THREADS")) {
    int v = std::atoi(e);
    if (v > 0) return std::min(v, hw);
  }
  return hw;
}

// f(i) for i in [0, n); chunks are claimed dynamically, f must only write to
// disjoint outputs.
template <class F>
void parallel_for(long n, F&& f) {
  int W = std::min<long>(worker_count(), std::max(1L, n));
  if (W <= 1) {
    for (long i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<long> next{0};
  auto run = [&] {
    for (long i; (i = next.fetch_add(1)) < n;) f(i);
  };
  std::vector<std::thread> pool;
  for (int k = 1; k < W; ++k) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
}

}  // namespace psiec
