#pragma once

#include <cstddef>
#include <functional>

namespace pointres {

/// Worker count from POINTRES_WORKERS, else hardware concurrency (>= 1).
unsigned default_workers();

/// Runs fn(i) for i in [0, n) on up to `workers` threads. Callers write
/// results into slot i, so output order never depends on scheduling. The
/// exception from the lowest failing index is rethrown.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn);

}  // namespace pointres
