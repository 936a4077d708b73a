#pragma once

#include <cstddef>
#include <functional>

namespace crs {

/// Worker count: CR_SPECTRA_THREADS if set to a positive integer, else hardware concurrency.
int thread_count();

/// Calls body(chunk, begin, end) for `chunks` contiguous slices of [0, count).
/// Slices are fixed by (count, chunks) alone, so per-chunk results reduced in chunk
/// order are independent of the number of threads.
void parallel_chunks(std::size_t count, std::size_t chunks,
                     const std::function<void(std::size_t chunk, std::size_t begin, std::size_t end)>& body);

}  // namespace crs
