#pragma once

#include <cstddef>
#include <functional>

namespace phasereg {

/// Worker count used by parallel_for; 0 selects the hardware concurrency.
void set_thread_count(std::size_t threads);
std::size_t thread_count();

/// Runs body(i) for i in [0, count). Iterations are independent and write to
/// disjoint outputs, so results do not depend on the schedule. The first
/// exception thrown by any iteration is rethrown on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace phasereg
