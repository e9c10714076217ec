#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tkcopula {

//! Calls fn(i) for i in [0, count) on up to `workers` threads. Work items
//! must write to disjoint outputs; the first exception is rethrown.
template<typename Fn>
void
parallel_for(std::size_t count, std::size_t workers, Fn&& fn)
{
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i)
      fn(i);
    return;
  }

  std::atomic<std::size_t> next{ 0 };
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error)
              error = std::current_exception();
            next = count;
          }
        }
      });
  }
  if (error)
    std::rethrow_exception(error);
}

inline std::size_t
default_workers()
{
  return std::max(1u, std::thread::hardware_concurrency());
}

} // namespace tkcopula
