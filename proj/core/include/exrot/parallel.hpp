#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

namespace exrot {

// requested >= 1 is taken as-is; anything else resolves to the hardware
// concurrency (at least 1).
inline int resolve_jobs(int requested) {
  if (requested >= 1) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Splits [0, count) into fixed chunks, maps each chunk to a chunk result
// (possibly on several threads), then folds the results in chunk order.
// With deterministic map_chunk the reduction is independent of scheduling,
// so jobs only changes wall time, never output.
template <typename Partial, typename MapChunk, typename Fold>
Partial chunked_reduce(std::size_t count, int jobs, std::size_t chunk_size, Partial init,
                       MapChunk&& map_chunk, Fold&& fold) {
  using Chunk = std::invoke_result_t<MapChunk&, std::size_t, std::size_t>;
  if (count == 0) return init;
  if (chunk_size == 0) chunk_size = 1;
  const std::size_t n_chunks = (count + chunk_size - 1) / chunk_size;
  int workers = resolve_jobs(jobs);
  if (static_cast<std::size_t>(workers) > n_chunks) workers = static_cast<int>(n_chunks);

  auto bounds = [&](std::size_t c) {
    std::size_t begin = c * chunk_size;
    std::size_t end = begin + chunk_size < count ? begin + chunk_size : count;
    return std::pair<std::size_t, std::size_t>(begin, end);
  };

  if (workers <= 1) {
    Partial acc = std::move(init);
    for (std::size_t c = 0; c < n_chunks; ++c) {
      auto [b, e] = bounds(c);
      fold(acc, map_chunk(b, e));
    }
    return acc;
  }

  std::vector<Chunk> partials(n_chunks);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      std::size_t c = next.fetch_add(1, std::memory_order_relaxed);
      if (c >= n_chunks) return;
      auto [b, e] = bounds(c);
      partials[c] = map_chunk(b, e);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& th : pool) th.join();

  Partial acc = std::move(init);
  for (std::size_t c = 0; c < n_chunks; ++c) fold(acc, std::move(partials[c]));
  return acc;
}

}  // namespace exrot
