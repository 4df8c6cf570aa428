#pragma once

#include <functional>

namespace frackpz {

/// Worker count: FRACKPZ_THREADS if set, else hardware concurrency.
int default_threads();

/// Runs body(i) for i in [0, n) on up to `threads` workers with a static
/// interleaved partition. Each index is written by exactly one worker, so
/// results do not depend on the thread count.
void parallel_for(int n, const std::function<void(int)>& body, int threads = 0);

}  // namespace frackpz
