#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace curvlab {

/// Serial is the reference path; Parallel runs the same per-index kernel under
/// OpenMP. Both write into preallocated slots, so results are identical.
enum class Execution { Serial, Parallel };

/// Thread cap from CURVLAB_THREADS (unset or invalid leaves the OpenMP default).
void configure_threads_from_env();
int max_threads();

template <class Kernel>
void for_each_index(std::size_t count, Execution exec, Kernel&& kernel)
{
    if (exec == Execution::Serial) {
        for (std::size_t i = 0; i < count; ++i) kernel(i);
        return;
    }
    const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) kernel(static_cast<std::size_t>(i));
}

/// Fixed-shape pairwise (tree) summation; the association order depends only
/// on the length, never on the thread count.
double pairwise_sum(std::span<const double> values);

} // namespace curvlab
