#pragma once

#include <cstdint>
#include <functional>

namespace entrokl {

// Global worker cap. 0 selects hardware concurrency. Thread-safe.
void set_max_threads(int n);
int max_threads();

// Runs fn(i) for i in [0, count). fn must be a pure function of i (all
// randomness derived from per-index seeds) and write only to its own output
// slot, so the result is identical for any worker count.
void parallel_for(std::int64_t count, const std::function<void(std::int64_t)>& fn);

}  // namespace entrokl
