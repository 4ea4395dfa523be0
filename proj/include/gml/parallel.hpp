#pragma once

#include <cstddef>
#include <functional>

namespace gml {

// Worker count: GML_THREADS if set to a positive integer, otherwise the
// hardware concurrency (at least 1).
unsigned worker_count();

// Runs body(i) for i in [0, n). Bodies write into caller-owned slots indexed
// by i, so results never depend on scheduling. If bodies throw, the exception
// from the lowest index is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace gml
