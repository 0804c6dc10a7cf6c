#pragma once

#include <cstddef>
#include <functional>

namespace cqw {

/// Worker count from CQW_WORKERS, else the hardware concurrency (at least 1).
unsigned default_worker_count();

/// Calls fn(i) for every i in [0, count) on up to `workers` threads
/// (0 means default_worker_count()). The first exception thrown by any call
/// is rethrown after all threads have joined.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn);

}  // namespace cqw
