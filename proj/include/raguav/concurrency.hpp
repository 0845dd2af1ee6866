#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace raguav {

/// Runs fn(i) for i in [0, n) on at most `limit` threads. Each index runs
/// exactly once. The first exception thrown by any call is rethrown after all
/// workers have joined; remaining indices are still drained.
template <typename Fn>
void bounded_parallel_for(std::size_t n, std::size_t limit, Fn&& fn) {
  if (n == 0) return;
  limit = std::clamp<std::size_t>(limit, 1, n);
  if (limit == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> workers;
    workers.reserve(limit);
    for (std::size_t w = 0; w < limit; ++w) {
      workers.emplace_back([&] {
        for (auto i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
          }
        }
      });
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace raguav
