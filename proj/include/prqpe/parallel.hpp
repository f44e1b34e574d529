#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace prqpe {

// Global switch between the OpenMP kernels and their serial reference
// implementations. The serial paths are kept for testing and benchmarking;
// results must agree bit-for-bit wherever a kernel promises determinism.
enum class Exec { parallel, serial };

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_thread_cap(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

}  // namespace prqpe
