#pragma once

// Runs independent sweep cells on a small thread pool. Results land in
// per-index slots, so the output order never depends on scheduling.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace qamp {

/// Worker count: QAMP_THREADS if set (>= 1), else hardware concurrency.
inline unsigned thread_budget() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("QAMP_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) n = static_cast<unsigned>(v);
    } catch (const std::exception&) {
      // ignore malformed values
    }
  }
  return n;
}

/// Calls fn(i) for i in [0, count). The first exception thrown by any cell is
/// rethrown after all workers stop.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn, unsigned max_threads = 0) {
  if (count == 0) return;
  unsigned workers = max_threads ? max_threads : thread_budget();
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace qamp
