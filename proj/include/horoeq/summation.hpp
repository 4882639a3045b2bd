#pragma once

#include <algorithm>
#include <atomic>
#include <complex>
#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace horoeq {

// Recursive pairwise summation. The split points depend only on the length,
// so the result is a deterministic function of the input order.
template <class T>
T pairwise_sum(std::span<const T> values) {
  constexpr std::size_t kLeaf = 16;
  if (values.size() <= kLeaf) {
    T acc{};
    for (const T& v : values) acc += v;
    return acc;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

template <class T>
T pairwise_sum(const std::vector<T>& values) {
  return pairwise_sum(std::span<const T>(values));
}

inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Sums f(0), ..., f(count-1) with a reduction tree whose shape is fixed by
// `count` alone: blocks of kBlock consecutive terms are pairwise-summed, then
// the block sums are pairwise-summed in block order. Thread count only
// changes which worker fills which block, never the arithmetic.
template <class T, class F>
T parallel_pairwise_sum(std::size_t count, unsigned threads, F&& f) {
  constexpr std::size_t kBlock = 4096;
  const std::size_t blocks = (count + kBlock - 1) / kBlock;
  std::vector<T> block_sums(blocks);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    std::vector<T> buffer;
    buffer.reserve(kBlock);
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= blocks) return;
      const std::size_t lo = b * kBlock;
      const std::size_t hi = std::min(count, lo + kBlock);
      buffer.clear();
      try {
        for (std::size_t i = lo; i < hi; ++i) buffer.push_back(f(i));
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(blocks);
        return;
      }
      block_sums[b] = pairwise_sum(std::span<const T>(buffer));
    }
  };

  const unsigned n_threads =
      static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(blocks, 1)));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return pairwise_sum(std::span<const T>(block_sums));
}

}  // namespace horoeq
