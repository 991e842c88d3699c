#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace trustlink {

/// Worker count: TRUSTLINK_THREADS when set (>=1), else hardware concurrency.
std::size_t worker_count();

/// Runs fn(i) for i in [0, n) across the worker pool. Tasks must be
/// independent; callers write results into per-index slots and reduce
/// sequentially afterwards so output is identical for any worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace trustlink
