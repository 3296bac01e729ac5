#include "jmes/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace jmes::parallel {

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void for_each_block(std::int64_t n_blocks, Exec exec,
                    const std::function<void(std::int64_t)>& fn) {
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t b = 0; b < n_blocks; ++b) fn(b);
    } else {
        for (std::int64_t b = 0; b < n_blocks; ++b) fn(b);
    }
}

}  // namespace jmes::parallel
