#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace floquet {

/// Worker count: requested if positive, otherwise hardware concurrency.
inline int resolve_jobs(int requested) {
  if (requested > 0) return requested;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

/// Runs fn(begin, end) over contiguous chunks of [0, count) on at most `jobs`
/// threads. The first exception thrown by a worker is rethrown here.
template <class Fn>
void parallel_chunks(std::size_t count, int jobs, Fn&& fn) {
  if (count == 0) return;
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(resolve_jobs(jobs)), count);
  if (workers <= 1) {
    fn(std::size_t{0}, count);
    return;
  }
  std::exception_ptr err;
  std::mutex m;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t b = count * w / workers, e = count * (w + 1) / workers;
    pool.emplace_back([&, b, e] {
      try {
        fn(b, e);
      } catch (...) {
        std::lock_guard lock(m);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

/// Per-index variant of parallel_chunks.
template <class Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn) {
  parallel_chunks(count, jobs, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) fn(i);
  });
}

}  // namespace floquet
