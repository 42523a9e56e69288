// parallel.hpp — deterministic task-parallel loop.
//
// Tasks write only into their own pre-allocated slots and the caller reduces
// the slots in fixed index order, so results are byte-identical for every
// thread count.
#pragma once

#include <atomic>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace spinboson::numerics {

inline void parallel_for(int n_tasks, int n_threads,
                         const std::function<void(int)>& task) {
  if (n_tasks <= 0) return;
  n_threads = std::max(1, std::min(n_threads, n_tasks));
  if (n_threads == 1) {
    for (int i = 0; i < n_tasks; ++i) task(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::atomic<bool> failed{false};
  std::mutex err_mutex;
  pool.reserve(static_cast<size_t>(n_threads));
  for (int w = 0; w < n_threads; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n_tasks || failed.load()) return;
        try {
          task(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!failed.exchange(true)) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failed.load() && first_error) std::rethrow_exception(first_error);
}

}  // namespace spinboson::numerics
