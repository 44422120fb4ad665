#include "mispolar/parallel.hpp"

#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mispolar {

namespace {
int g_forced = 0;
}

void set_worker_count(int n) { g_forced = n < 0 ? 0 : n; }

int worker_count() {
    if (g_forced > 0) return g_forced;
    int n = 1;
#ifdef _OPENMP
    n = omp_get_max_threads();
#endif
    if (const char* env = std::getenv("POLAR_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1 && cap < n) n = cap;
    }
    return n < 1 ? 1 : n;
}

}  // namespace mispolar
