#pragma once

#include <cstddef>
#include <functional>

namespace vns {

/// Thread count for assembly loops: VNS_THREADS if set and positive,
/// otherwise the hardware concurrency (at least 1).
int assembly_threads();

/// Splits [0, n) into contiguous chunks, one per thread, and calls
/// body(chunk_index, begin, end). Chunk boundaries depend only on n and the
/// chunk count, so callers that merge per-chunk output in chunk order get
/// results independent of scheduling.
void parallel_chunks(std::size_t n, int chunks,
                     const std::function<void(int, std::size_t, std::size_t)>& body);

}  // namespace vns
