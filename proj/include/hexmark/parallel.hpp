#pragma once

// Deterministic chunked reduction. The index range is cut into a chunk count
// that depends only on the range (never on the worker count), workers grab
// chunks from an atomic counter, and partial results merge in chunk order.
// Output is therefore bit-identical regardless of --threads.

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace hexmark {

inline constexpr const char* kThreadsEnvVar = "HEXMARK_THREADS";

// Worker count: explicit request, else the HEXMARK_THREADS cap, else
// hardware concurrency.
inline int resolve_thread_count(int requested = 0) {
  if (requested > 0) return requested;
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  if (const char* env = std::getenv(kThreadsEnvVar)) {
    char* end = nullptr;
    long cap = std::strtol(env, &end, 10);
    if (end != env && cap > 0 && cap < 1024) hw = std::min(hw, static_cast<int>(cap));
  }
  return hw;
}

// chunk_fn(chunk_index, begin, end) -> R; merge_fn(R& acc, R&& part) folds in
// chunk order. items_per_chunk only shapes the chunking, not the result.
template <class R, class ChunkFn, class MergeFn>
R chunked_reduce(std::uint64_t n_items, std::uint64_t items_per_chunk, int threads,
                 ChunkFn chunk_fn, MergeFn merge_fn) {
  if (items_per_chunk == 0) items_per_chunk = 1;
  const std::uint64_t n_chunks = n_items == 0 ? 0 : (n_items - 1) / items_per_chunk + 1;
  std::vector<std::optional<R>> parts(n_chunks);

  auto run_chunk = [&](std::uint64_t c) {
    const std::uint64_t begin = c * items_per_chunk;
    const std::uint64_t end = std::min(n_items, begin + items_per_chunk);
    parts[c] = chunk_fn(c, begin, end);
  };

  const int workers = std::min<std::uint64_t>(resolve_thread_count(threads),
                                              n_chunks == 0 ? 1 : n_chunks);
  if (workers <= 1) {
    for (std::uint64_t c = 0; c < n_chunks; ++c) run_chunk(c);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::uint64_t c = next.fetch_add(1);
          if (c >= n_chunks) return;
          run_chunk(c);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  R total{};
  for (std::uint64_t c = 0; c < n_chunks; ++c) {
    merge_fn(total, std::move(*parts[c]));
  }
  return total;
}

}  // namespace hexmark
