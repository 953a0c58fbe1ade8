#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace groupwalk {

// Runs fn(trial_index) for trial_index in [0, trials) on `threads` workers.
// Each result lands in its own slot, so the outcome is independent of the
// thread count and of scheduling order.
template <typename Result>
std::vector<Result> parallel_trials(int trials, int threads,
                                    const std::function<Result(int)>& fn) {
  std::vector<Result> results(static_cast<std::size_t>(trials));
  if (threads <= 1 || trials <= 1) {
    for (int i = 0; i < trials; ++i) results[static_cast<std::size_t>(i)] = fn(i);
    return results;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  const int workers = std::min(threads, trials);
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= trials) return;
        results[static_cast<std::size_t>(i)] = fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
  return results;
}

}  // namespace groupwalk
