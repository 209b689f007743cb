#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace kdb {

// Worker count: KB_THREADS if set and positive, else hardware concurrency.
inline unsigned thread_count() {
  if (const char* env = std::getenv("KB_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v > 0) return unsigned(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

// Runs fn(i) for i in [0, n). Results must be written to per-index slots so
// that the outcome is identical for any worker count.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                         unsigned threads = 0) {
  if (threads == 0) threads = thread_count();
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (std::thread& th : pool) th.join();
}

}  // namespace kdb
