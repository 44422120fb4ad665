// Worker-count control. POLAR_THREADS caps the OpenMP pool; 1 forces the
// serial reference path everywhere.

#pragma once

namespace mispolar {

// Number of workers: min(omp_get_max_threads(), POLAR_THREADS), at least 1.
int worker_count();

// Force a specific worker count for this process (0 = back to automatic).
void set_worker_count(int n);

inline bool parallel_enabled() { return worker_count() > 1; }

}  // namespace mispolar
