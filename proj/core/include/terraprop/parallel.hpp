#pragma once

#include <cstddef>
#include <functional>

namespace terraprop {

/// Splits [0, count) into contiguous chunks and runs `body(begin, end)` on up
/// to `threads` workers. threads <= 1 runs inline. Callers must only write to
/// disjoint outputs per index so results never depend on the split. The
/// first exception thrown by any worker is rethrown after all have joined.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t, std::size_t)>& body);

/// Number of hardware threads, at least 1.
int hardware_threads() noexcept;

}  // namespace terraprop
