#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace stereowave {

//! Number of worker threads. Controlled by the STEREOWAVE_WORKERS environment
//! variable; defaults to the hardware concurrency.
std::size_t worker_count();

//! Splits [0, n) into fixed-size chunks and runs `body(begin, end)` on a pool
//! of workers. Outputs written to disjoint slots are bitwise deterministic
//! for any worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

//! Chunked sum reduction. `map` produces the partial sum of one chunk; the
//! partials are combined in ascending chunk order, so the result does not
//! depend on the worker count. Chunk size is fixed, not derived from the
//! number of workers.
double parallel_sum(std::size_t n, std::size_t chunk,
                    const std::function<double(std::size_t, std::size_t)>& map);

}  // namespace stereowave
