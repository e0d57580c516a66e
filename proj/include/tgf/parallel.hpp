#pragma once

#include <cstddef>
#include <functional>

namespace tgf {

/// Worker count: TGF_THREADS if set to a positive integer, else the
/// hardware concurrency (at least 1).
unsigned worker_count();

/// Calls fn(i) for i in [0, count) on up to worker_count() threads. Each index
/// runs exactly once; callers store results by index and reduce afterwards,
/// so the outcome does not depend on scheduling. The first exception thrown
/// by any call is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace tgf
