#pragma once

#include <cstddef>
#include <functional>

namespace optomech {

// Process-wide worker count used by parallel_for when none is given.
// 0 means std::thread::hardware_concurrency().
void set_default_threads(unsigned n);
unsigned default_threads();

// Runs body(i) for i in [0, n). Indices are handed out dynamically, so the
// body must write its result to slot i rather than append; callers then
// reduce in index order, which keeps output independent of scheduling.
// The first exception thrown by any body is rethrown after all workers join.
// A parallel_for called from inside a body runs serially.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, unsigned threads = 0);

} // namespace optomech
