// fusecluster
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

namespace fc {

// Worker cap: FUSECLUSTER_THREADS if set (clamped to >= 1), otherwise
// hardware concurrency.
int max_threads();

// Run fn(i) for i in [0, n). Iterations are split into contiguous chunks
// across threads; fn must only write to per-index slots so the outcome is
// identical to the sequential loop. Nested calls degrade to sequential
// execution. The first exception thrown by any fn is rethrown here.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace fc
