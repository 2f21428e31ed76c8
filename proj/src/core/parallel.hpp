#pragma once

// Fixed-chunk parallel loops. The chunking does not depend on the thread
// count, so per-chunk partial results can be combined in a fixed order.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace equiorbit {

// EQUIORBIT_THREADS caps the worker count (default: hardware concurrency).
inline int thread_count() {
  static const int n = [] {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("EQUIORBIT_THREADS")) {
      const int cap = std::atoi(env);
      if (cap >= 1) hw = std::min(hw, cap);
    }
    return hw;
  }();
  return n;
}

// Calls f(chunk, begin, end) for `chunks` contiguous slices of [0, n).
template <class F>
void parallel_chunks(std::size_t n, std::size_t chunks, F&& f) {
  chunks = std::max<std::size_t>(1, std::min(chunks, n));
  auto bounds = [&](std::size_t c) { return std::pair{n * c / chunks, n * (c + 1) / chunks}; };
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) {
      const auto [b, e] = bounds(c);
      f(c, b, e);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  auto run = [&] {
    for (std::size_t c = next++; c < chunks; c = next++) {
      try {
        const auto [b, e] = bounds(c);
        f(c, b, e);
      } catch (...) {
        std::lock_guard lock(err_mu);
        if (!err) err = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace equiorbit
