#pragma once

#include <cstddef>
#include <functional>

namespace opcalc {

// Worker count: OPCALC_THREADS if set, else the hardware concurrency.
unsigned thread_count();

// Runs body(worker, i) for i in [0, n), splitting the range over thread_count() workers.
void parallel_for(std::size_t n, const std::function<void(unsigned, std::size_t)>& body);

}  // namespace opcalc
