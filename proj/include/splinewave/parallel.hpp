#pragma once

// Minimal fork-join loop over an index range. The worker count defaults to
// the hardware concurrency and is capped by SPLINEWAVE_THREADS.

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace splinewave {

inline unsigned thread_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SPLINEWAVE_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    } catch (const std::exception&) {
      // unparsable value: keep the default
    }
  }
  return n;
}

/// Calls body(begin, end) on disjoint chunks covering [0, n). The first
/// exception thrown by any chunk is rethrown on the calling thread.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  const std::size_t workers = std::min<std::size_t>(thread_count(), std::max<std::size_t>(n / 64, 1));
  if (workers <= 1) {
    body(std::size_t{0}, n);
    return;
  }
  std::exception_ptr failure;
  std::mutex guard;
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      try {
        body(lo, hi);
      } catch (...) {
        std::lock_guard lock(guard);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

/// Sum of term(i) over [0, n), accumulated per chunk.
template <class T, class Term>
T parallel_sum(std::size_t n, Term&& term) {
  std::mutex guard;
  T total{};
  parallel_for(n, [&](std::size_t lo, std::size_t hi) {
    T part{};
    for (std::size_t i = lo; i < hi; ++i) part += term(i);
    std::lock_guard lock(guard);
    total += part;
  });
  return total;
}

}  // namespace splinewave
