#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "harmonic/random.hpp"

namespace harmonic {

/// Chunked Monte Carlo driver.
///
/// `total` items are cut into chunks of `chunk_size`; chunk i is handed a
/// RandomStream(seed, stream_base + i). Results are returned in chunk order,
/// so the output depends only on (seed, stream_base, total, chunk_size) and
/// not on the number of workers.
struct ChunkPlan {
  std::size_t total = 0;
  std::size_t chunk_size = 1 << 14;
  std::uint64_t seed = 0;
  std::uint64_t stream_base = 0;
  unsigned workers = 0;  // 0: hardware concurrency
};

template <class Result, class Fn>
std::vector<Result> run_chunks(const ChunkPlan& plan, Fn&& fn) {
  const std::size_t chunk = std::max<std::size_t>(plan.chunk_size, 1);
  const std::size_t n_chunks = (plan.total + chunk - 1) / chunk;
  std::vector<Result> results(n_chunks);
  if (n_chunks == 0) return results;

  unsigned workers = plan.workers ? plan.workers : std::thread::hardware_concurrency();
  workers = static_cast<unsigned>(std::clamp<std::size_t>(workers, 1, n_chunks));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n_chunks) return;
      const std::size_t begin = i * chunk;
      const std::size_t count = std::min(chunk, plan.total - begin);
      try {
        RandomStream stream(plan.seed, plan.stream_base + i);
        results[i] = fn(stream, begin, count);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n_chunks);
        return;
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

/// Convenience wrapper: each chunk yields a vector<double>, concatenated in
/// chunk order.
template <class Fn>
std::vector<double> collect_samples(const ChunkPlan& plan, Fn&& fn) {
  auto parts = run_chunks<std::vector<double>>(plan, std::forward<Fn>(fn));
  std::vector<double> out;
  out.reserve(plan.total);
  for (auto& part : parts) out.insert(out.end(), part.begin(), part.end());
  return out;
}

}  // namespace harmonic
