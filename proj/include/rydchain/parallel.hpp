#pragma once

#include <cstddef>
#include <functional>

namespace rydchain {

/// Worker count from RYDCHAIN_WORKERS, else the hardware concurrency (at least 1).
int worker_count();

/// Calls body(i) for i in [0, n) on up to `workers` threads. The exception of the
/// lowest failing index is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, int workers = worker_count());

}  // namespace rydchain
