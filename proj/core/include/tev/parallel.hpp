#pragma once

#include <cstddef>
#include <functional>

namespace tev {

// Worker count resolution: explicit flag > TEV_JOBS environment variable >
// hardware concurrency.
int resolve_jobs(int flag_value);

// Chunked parallel loop over [0, n). fn must be safe to call concurrently on
// distinct indices. Runs inline when jobs <= 1 or n is small.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int jobs);

}  // namespace tev
