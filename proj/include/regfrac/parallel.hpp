#pragma once

#include <cstddef>
#include <functional>

namespace regfrac {

/// Number of worker threads used by data-parallel loops (default 1).
void set_thread_count(int n);
int thread_count();

/// Runs body(begin, end) over a partition of [0, n). Each index is visited by
/// exactly one call, so results do not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace regfrac
