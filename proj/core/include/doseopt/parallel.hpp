#pragma once

#include <functional>

namespace doseopt {

// Worker count: DOSEOPT_THREADS if set to a positive integer, otherwise
// hardware concurrency (at least 1).
int thread_budget();

// Runs fn(i) for i in [0, n). Work items must not depend on execution order;
// callers get determinism by writing to disjoint slots.
void parallel_for(int n, const std::function<void(int)>& fn, int threads = 0);

}  // namespace doseopt
