#pragma once

#include <cstddef>
#include <functional>

namespace equispec {

/// Worker count: EQUISPEC_THREADS when set (>= 1), else the hardware count.
int thread_budget();

/// Runs body(0..n-1) on up to thread_budget() threads. The first exception
/// thrown by any job is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace equispec
