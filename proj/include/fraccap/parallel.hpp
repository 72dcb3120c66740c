#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace fraccap {

// Thread cap: min(FRACCAP_THREADS, hardware_concurrency), at least 1.
// FRACCAP_THREADS unset or invalid means "use the hardware count".
int max_threads();

// Runs fn(chunk_index) for chunk_index in [0, n_chunks). Chunk boundaries are
// fixed by the caller and independent of the worker count, so any result that
// is combined per-chunk in index order is bit-identical no matter how many
// threads execute. fn must not throw.
void parallel_for_chunks(int n_chunks, const std::function<void(int)>& fn);

// Convenience: split [0, n) into n_chunks half-open ranges of near-equal size.
struct IndexRange {
  std::int64_t begin = 0;
  std::int64_t end = 0;
};
IndexRange chunk_range(std::int64_t n, int n_chunks, int chunk);

}  // namespace fraccap
