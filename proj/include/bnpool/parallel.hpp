#pragma once

#include <cstddef>
#include <span>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bnpool {

// Tables smaller than this stay on the serial path; OpenMP overhead would
// dominate at desk scale.
inline constexpr std::size_t kParallelGrain = std::size_t{1} << 15;

// Fixed block width for deterministic reductions. Partial sums are formed per
// block and combined in block order, so the result is independent of the
// number of threads and of whether OpenMP is enabled at all.
inline constexpr std::size_t kReduceBlock = std::size_t{1} << 12;

inline int thread_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// Schedule-independent sum over a span. Blocked partials, combined in order.
inline double blocked_sum(std::span<const double> xs) {
    const std::size_t n = xs.size();
    const std::size_t blocks = (n + kReduceBlock - 1) / kReduceBlock;
    if (blocks <= 1) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    std::vector<double> partial(blocks, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (n >= kParallelGrain)
#endif
    for (long long b = 0; b < static_cast<long long>(blocks); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kReduceBlock;
        const std::size_t hi = lo + kReduceBlock < n ? lo + kReduceBlock : n;
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += xs[i];
        partial[static_cast<std::size_t>(b)] = s;
    }
    double s = 0.0;
    for (double p : partial) s += p;
    return s;
}

} // namespace bnpool
