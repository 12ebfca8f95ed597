#pragma once

#include <cstddef>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace curator {

// Runs fn(i) for i in [0, n). workers == 1 takes the plain serial loop, which
// is the reference path the tests compare against; workers > 1 uses OpenMP.
// Iterations must be independent and write only to their own slots so the
// result is identical for every worker count. The first exception thrown by
// any iteration is rethrown on the calling thread.
template <class Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
#ifdef _OPENMP
    if (workers > 1) {
        std::exception_ptr first_error = nullptr;
        #pragma omp parallel for schedule(dynamic) num_threads(workers)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            try {
                fn(static_cast<std::size_t>(i));
            } catch (...) {
                #pragma omp critical(curator_parallel_for_error)
                {
                    if (!first_error) first_error = std::current_exception();
                }
            }
        }
        if (first_error) std::rethrow_exception(first_error);
        return;
    }
#endif
    (void)workers;
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

}  // namespace curator
