#pragma once

#include <cstddef>
#include <functional>
#include <optional>

namespace stoqease {

/// Thread count from an explicit request, else STOQEASE_THREADS, else the
/// hardware concurrency. Always >= 1.
int resolve_threads(std::optional<int> requested = std::nullopt);

/// Calls body(i) for every i in [0, count) on up to `threads` workers.
/// Workers pull indices from a shared counter; the first exception thrown
/// by any body is rethrown on the calling thread after all workers join.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace stoqease
