#pragma once

#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace pcx {

inline int default_thread_count() {
  if (const char* env = std::getenv("PCX_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

/// Runs fn(i) for i in [0, n) on contiguous chunks. Each index writes only
/// its own output slots, so results are identical to a sequential loop for
/// any thread count. The first exception thrown is rethrown after joining.
inline void parallel_for(long n, const std::function<void(long)>& fn, int threads = 0) {
  if (threads <= 0) threads = default_thread_count();
  if (threads > n) threads = static_cast<int>(n);
  if (n <= 0) return;
  if (threads <= 1) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    long lo = n * t / threads;
    long hi = n * (t + 1) / threads;
    pool.emplace_back([&, lo, hi] {
      try {
        for (long i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace pcx
