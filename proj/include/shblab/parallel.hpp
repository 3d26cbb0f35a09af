#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace shblab {

// Runs fn(block) for block in [0, n_blocks) on up to `jobs` threads
// (jobs <= 1 runs inline). Blocks are claimed from an atomic counter, so
// callers keep determinism by writing into per-block slots and reducing in
// block order afterwards. Exceptions from workers are rethrown on the
// calling thread.
inline void parallel_blocks(std::int64_t n_blocks, int jobs,
                            const std::function<void(std::int64_t)>& fn) {
  if (n_blocks <= 0) return;
  if (jobs <= 1 || n_blocks == 1) {
    for (std::int64_t i = 0; i < n_blocks; ++i) fn(i);
    return;
  }
  const int workers =
      static_cast<int>(std::min<std::int64_t>(jobs, n_blocks));
  std::atomic<std::int64_t> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (;;) {
          const std::int64_t i = next.fetch_add(1);
          if (i >= n_blocks) break;
          fn(i);
        }
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace shblab
