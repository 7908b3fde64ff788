#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <cstddef>
#include <stdexcept>
#include <thread>
#include <vector>

namespace svp::par {

// Global worker cap, settable from the CLI (--threads). 0 means "use hardware".
inline std::atomic<int>& worker_cap() {
  static std::atomic<int> cap{0};
  return cap;
}

inline void set_max_threads(int n) {
  if (n < 0) throw std::invalid_argument("thread count must be >= 0");
  worker_cap().store(n);
}

inline int max_threads() {
  int cap = worker_cap().load();
  if (cap > 0) return cap;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Index-parallel loop. Each index writes only its own output slots, so the
// result is identical for any worker count. No reductions happen here.
template <class F>
void parallel_for(std::size_t n, F&& body, std::size_t grain = 1) {
  if (n == 0) return;
  const std::size_t nw =
      std::min<std::size_t>(static_cast<std::size_t>(max_threads()), std::max<std::size_t>(1, n / std::max<std::size_t>(grain, 1)));
  if (nw <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(nw);
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (std::size_t w = 0; w < nw; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n || failed.load(std::memory_order_relaxed)) return;
        try {
          body(i);
        } catch (...) {
          std::scoped_lock lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          failed.store(true);
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace svp::par
