#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace modkit {

/// Worker count used by scans. Initialized from MODKIT_THREADS, else the
/// hardware concurrency.
unsigned thread_count();
void set_thread_count(unsigned n);

/// Run body(worker, begin, end) over contiguous chunks of [0, total).
/// Chunks are assigned by worker index, so results that are reduced by
/// max/sum with explicit tie-breaking do not depend on scheduling.
template <typename Body>
void parallel_ranges(std::uint64_t total, Body&& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(thread_count(), std::max<std::uint64_t>(total, 1)));
  if (workers <= 1) {
    body(0U, std::uint64_t{0}, total);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t begin = total * w / workers;
    const std::uint64_t end = total * (w + 1) / workers;
    pool.emplace_back([&body, w, begin, end] { body(w, begin, end); });
  }
  for (auto& t : pool) t.join();
}

/// Fixed block count for seeded sampling. Sample streams are tied to blocks,
/// not workers, so results do not depend on the thread count.
inline constexpr unsigned kSampleBlocks = 16;

/// Run body(block) for block in [0, blocks), spread across workers.
template <typename Body>
void for_blocks(unsigned blocks, Body&& body) {
  parallel_ranges(blocks, [&](unsigned, std::uint64_t b, std::uint64_t e) {
    for (std::uint64_t i = b; i < e; ++i) body(static_cast<unsigned>(i));
  });
}

}  // namespace modkit
