#pragma once

#include <functional>

namespace pevmzi {

/// Worker count from PEV_MZI_THREADS (0 or unset = hardware concurrency).
int thread_budget();

/// Runs fn(i) for i in [0, n) on up to `workers` threads (0 = thread_budget()).
/// Static block partition; results must be written to disjoint slots, so the
/// outcome is bitwise independent of the worker count.
void parallel_for(int n, const std::function<void(int)>& fn, int workers = 0);

} // namespace pevmzi
