#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace riskrev {

/// Worker cap: RISKREV_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
int worker_count();

/// Runs fn(chunk_index, begin, end) over [0, n) split into chunks of `chunk`
/// items and returns the per-chunk results in chunk order. Scheduling never
/// affects the returned values. The first exception by chunk order is
/// rethrown after all workers finish.
template <class Acc, class Fn>
std::vector<Acc> run_chunks(std::uint64_t n, std::uint64_t chunk, Fn&& fn) {
  const std::uint64_t chunks = (n + chunk - 1) / chunk;
  std::vector<Acc> results(chunks);
  std::vector<std::exception_ptr> errors(chunks);
  std::atomic<std::uint64_t> next{0};

  auto work = [&]() {
    for (std::uint64_t c = next++; c < chunks; c = next++) {
      const std::uint64_t begin = c * chunk;
      const std::uint64_t end = std::min(n, begin + chunk);
      try {
        results[c] = fn(c, begin, end);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    }
  };

  const auto workers = static_cast<std::uint64_t>(worker_count());
  const std::uint64_t spawn = std::min<std::uint64_t>(workers, chunks);
  if (spawn <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(spawn - 1);
    for (std::uint64_t t = 1; t < spawn; ++t) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace riskrev
