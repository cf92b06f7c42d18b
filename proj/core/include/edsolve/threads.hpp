#pragma once
// Minimal deterministic parallel-for. Worker count comes from (in order)
// an explicit set_thread_count call, the EDSOLVE_THREADS env var, then
// hardware concurrency. Results are written to preallocated slots so the
// outcome is independent of scheduling.

#include <functional>

namespace eds {

void set_thread_count(int count);  // 0 = auto
int thread_count();

void parallel_for(int begin, int end, const std::function<void(int)>& body);

}  // namespace eds
