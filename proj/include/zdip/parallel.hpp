#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace zdip {

inline unsigned default_thread_count() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1u : hc;
}

// Runs fn(task_index, thread_slot) for every task_index in [0, n_tasks).
//
// Contract: fn's observable output must depend only on task_index, never on
// thread_slot, scheduling, or thread count; thread_slot (in [0, n_threads))
// exists solely so callers can reuse per-thread scratch buffers. Under that
// contract the result of any caller is identical for every n_threads.
//
// Every task runs even if some throw; afterwards the exception with the
// lowest task index is rethrown, which is exactly the error a sequential
// loop that runs all tasks would surface first.
inline void parallel_for(std::int64_t n_tasks, unsigned n_threads,
                         const std::function<void(std::int64_t, unsigned)>& fn) {
  if (n_tasks <= 0) return;
  if (n_threads > static_cast<std::uint64_t>(n_tasks)) {
    n_threads = static_cast<unsigned>(n_tasks);
  }
  if (n_threads <= 1) {
    std::exception_ptr first_error;
    for (std::int64_t i = 0; i < n_tasks; ++i) {
      try {
        fn(i, 0);
      } catch (...) {
        if (!first_error) first_error = std::current_exception();
      }
    }
    if (first_error) std::rethrow_exception(first_error);
    return;
  }

  struct SlotError {
    std::int64_t task = -1;
    std::exception_ptr error;
  };
  std::vector<SlotError> slot_errors(n_threads);
  std::atomic<std::int64_t> next{0};

  auto worker = [&](unsigned slot) {
    for (;;) {
      const std::int64_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n_tasks) return;
      try {
        fn(i, slot);
      } catch (...) {
        SlotError& se = slot_errors[slot];
        if (se.task < 0 || i < se.task) {
          se.task = i;
          se.error = std::current_exception();
        }
      }
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(n_threads);
  for (unsigned s = 0; s < n_threads; ++s) threads.emplace_back(worker, s);
  for (auto& t : threads) t.join();

  const SlotError* lowest = nullptr;
  for (const auto& se : slot_errors) {
    if (se.task >= 0 && (lowest == nullptr || se.task < lowest->task)) {
      lowest = &se;
    }
  }
  if (lowest != nullptr) std::rethrow_exception(lowest->error);
}

}  // namespace zdip
