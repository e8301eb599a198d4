// parallel.hpp — index-range parallelism capped by QCTRL_THREADS

#pragma once

#include <functional>

namespace qctrl {

// min(hardware threads, QCTRL_THREADS), at least 1.
int worker_count();

// Runs body(0..n-1) across workers; results must go to caller-owned slots so
// assembly stays order-independent. Rethrows the first worker exception.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace qctrl
