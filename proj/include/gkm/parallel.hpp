#pragma once

// Minimal fork-join helper. Tasks must be independent; each writes its
// own output slot, so results do not depend on scheduling order.
// Thread count comes from GKM_THREADS, defaulting to the hardware count.

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace gkm {

inline unsigned thread_count() {
  if (const char* env = std::getenv("GKM_THREADS")) {
    long n = std::strtol(env, nullptr, 10);
    if (n >= 1) return (unsigned)n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

template <class Fn>
void parallel_for(std::size_t n, Fn&& body) {
  unsigned workers = thread_count();
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  if (workers > n) workers = (unsigned)n;
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned t = 1; t < workers; ++t) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

} // namespace gkm
