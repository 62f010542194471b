#pragma once

#include <cstddef>
#include <functional>

namespace congae {

/// Calls fn(i) for i in [0, n) over up to `threads` workers (static
/// contiguous chunks). The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn);

}  // namespace congae
