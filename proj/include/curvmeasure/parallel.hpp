#pragma once

#include <cstddef>
#include <functional>

namespace curvmeasure {

/// Worker count: GB_THREADS if set and positive, otherwise hardware concurrency.
unsigned thread_count();

/// Runs body(i) for i in [0, n). Each index is processed exactly once; the
/// exception of the lowest failing index is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace curvmeasure
