// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

namespace rissat {

/// Worker cap: RISSAT_THREADS if set and positive, else hardware concurrency.
std::size_t thread_limit();

/// Runs fn(chunk_index, begin, end) over [0, n) split into fixed-size chunks.
/// Chunk boundaries depend only on n and chunk_size, never on the thread
/// count, so callers that reduce per-chunk results in chunk order get
/// bit-identical output for any RISSAT_THREADS.
void parallel_chunks(std::size_t n, std::size_t chunk_size,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

inline std::size_t chunk_count(std::size_t n, std::size_t chunk_size) {
  return (n + chunk_size - 1) / chunk_size;
}

} // namespace rissat
