#pragma once

#include <cstddef>
#include <functional>

namespace tailfit {

// Worker count for parallel_for: TAILFIT_THREADS if set (clamped to >= 1),
// otherwise the hardware concurrency.
std::size_t worker_count();

// Runs fn(0..n-1) across workers.  Tasks must be independent and write only
// to their own slot, so the result is identical for any worker count or
// scheduling order.  The first exception thrown by a task is rethrown after
// all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace tailfit
