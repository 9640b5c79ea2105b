#pragma once

#include <cstddef>
#include <functional>

namespace kfn {

/// Worker count: hardware concurrency, capped by the K_THREADS environment
/// variable when it is set to a positive integer.
std::size_t worker_count();

/// Runs body(i) for i in [0, n). Each index is handled exactly once; callers
/// write results into preallocated slots so the outcome does not depend on
/// scheduling. If bodies throw, the exception from the lowest index is
/// rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace kfn
