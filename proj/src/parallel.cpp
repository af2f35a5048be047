#include "curvlab/parallel.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

namespace curvlab {

void configure_threads_from_env()
{
    const char* raw = std::getenv("CURVLAB_THREADS");
    if (raw == nullptr) return;
    try {
        const int threads = std::stoi(raw);
        if (threads > 0) omp_set_num_threads(threads);
    } catch (const std::exception&) {
        // ignored: leave the runtime default
    }
}

int max_threads() { return omp_get_max_threads(); }

double pairwise_sum(std::span<const double> values)
{
    constexpr std::size_t leaf = 8;
    if (values.size() <= leaf) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

} // namespace curvlab
