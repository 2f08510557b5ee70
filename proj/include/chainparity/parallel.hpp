#pragma once

// Thin wrapper so every kernel compiles (and runs serially) without OpenMP.

#ifdef _OPENMP
#include <omp.h>
namespace chainparity {
inline int max_workers() { return omp_get_max_threads(); }
}
#else
namespace chainparity {
inline int max_workers() { return 1; }
}
#endif

namespace chainparity {

// 0 means "use all hardware threads".
inline int resolve_workers(int requested) {
    if (requested <= 0)
        return max_workers();
    return requested;
}

} // namespace chainparity
