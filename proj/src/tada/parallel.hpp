#pragma once

#include <cstdint>
#include <functional>

namespace tada {

// Worker cap: hardware concurrency, clamped by the TADA_THREADS environment
// variable when it is set to a positive integer.
int max_threads();

// Runs fn(i) for every i in [0, n). Blocks until all workers finish; the
// first exception raised by any worker is rethrown. Results must be written
// to per-index slots, which keeps output independent of scheduling.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn);

}  // namespace tada
