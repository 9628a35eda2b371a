#pragma once

#include <cstddef>
#include <functional>

namespace subsql {

// Worker count for internally parallel loops: min(SUBSQL_THREADS, hardware),
// defaulting to the hardware count; always >= 1.
std::size_t worker_count();

// Runs fn(i) for i in [0, n) across worker_count() threads. Falls back to a
// plain loop for a single worker. fn must be safe to call concurrently for
// distinct i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace subsql
