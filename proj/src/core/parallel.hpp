#pragma once

#include <cstddef>
#include <functional>

namespace wavelqg {

// Worker count for fan-out work: `requested` if nonzero, otherwise the
// hardware concurrency; capped by the WAVELQG_THREADS environment variable.
unsigned resolve_threads(unsigned requested);

// Calls body(i) for i in [0, count) across `threads` workers. body must only
// write to slot i of its output so results do not depend on scheduling.
// The first exception thrown by any worker is rethrown on the caller.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace wavelqg
