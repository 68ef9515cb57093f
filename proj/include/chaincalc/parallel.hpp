#pragma once

#include <cstdlib>
#include <string>
#include <vector>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace chaincalc::par {

/// Thread count: CHAINCALC_THREADS env if set, else the OpenMP default.
/// A value of 1 (or a non-OpenMP build) selects the serial reference path.
inline int max_threads() {
    if (const char* env = std::getenv("CHAINCALC_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
#if defined(_OPENMP)
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline bool enabled() { return max_threads() > 1; }

/// Parallel loop over [0, n).  `f(i)` must only write state owned by index i;
/// callers combine the indexed results serially so output order (and float
/// summation order) never depends on the schedule.
template <class F>
void parallel_for(std::size_t n, F&& f) {
#if defined(_OPENMP)
    if (enabled() && n > 1) {
        const int nt = max_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
        for (long long i = 0; i < static_cast<long long>(n); ++i) f(static_cast<std::size_t>(i));
        return;
    }
#endif
    for (std::size_t i = 0; i < n; ++i) f(i);
}

} // namespace chaincalc::par
