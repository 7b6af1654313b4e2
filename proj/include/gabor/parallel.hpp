#pragma once

#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace gabor {

/// Static partition of [0, n) over worker threads; results must be written
/// to disjoint slots so the outcome is independent of the thread count.
inline void parallel_for(std::size_t n, int threads,
                         const std::function<void(std::size_t)>& fn) {
  unsigned t = threads > 0 ? unsigned(threads) : std::thread::hardware_concurrency();
  if (t == 0) t = 1;
  if (t > n) t = unsigned(n ? n : 1);
  if (t <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr first_error = nullptr;
  std::mutex error_lock;
  for (unsigned k = 0; k < t; ++k) {
    pool.emplace_back([&, k]() {
      const std::size_t lo = n * k / t;
      const std::size_t hi = n * (k + 1) / t;
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> guard(error_lock);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace gabor
