// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 dupscan contributors

#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace dupscan::detail {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(chunk_index, begin, end) over [0, n) split into one contiguous
/// chunk per thread. Chunk boundaries depend only on (n, threads), so callers
/// that merge per-chunk results in chunk order stay deterministic.
inline void parallel_chunks(size_t n, int threads,
                            const std::function<void(int, size_t, size_t)>& fn) {
  int t = resolve_threads(threads);
  if (t <= 1 || n < 2048) {
    fn(0, 0, n);
    return;
  }
  size_t per = (n + t - 1) / t;
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (int c = 0; c < t; ++c) {
    size_t b = std::min(n, static_cast<size_t>(c) * per);
    size_t e = std::min(n, b + per);
    if (b >= e) break;
    pool.emplace_back(fn, c, b, e);
  }
  for (auto& th : pool) th.join();
}

}  // namespace dupscan::detail
