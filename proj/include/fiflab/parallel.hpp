#pragma once

#include <cstddef>
#include <functional>

namespace fiflab {

// Worker count: hardware concurrency, capped by FIFLAB_THREADS when set.
std::size_t worker_count() noexcept;

// Splits [0, n) into contiguous chunks, one per worker, and calls
// body(begin, end, chunk) for each. Chunk boundaries depend only on n and the
// worker count, so callers that merge per-chunk results in chunk order get
// deterministic output.
void parallel_chunks(std::size_t n,
                     const std::function<void(std::size_t, std::size_t,
                                              std::size_t)>& body,
                     std::size_t max_chunks = 0);

}  // namespace fiflab
