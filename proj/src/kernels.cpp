#include "bnpool/kernels.hpp"

#include <cmath>
#include <limits>

#include "bnpool/parallel.hpp"

namespace bnpool {

namespace {

inline double kl_term(double p, double q) {
    if (p <= 0.0) return 0.0;
    if (q <= 0.0) return std::numeric_limits<double>::infinity();
    return p * std::log2(p / q);
}

} // namespace

double kl_table(std::span<const double> p, std::span<const double> q) {
    const std::size_t n = p.size();
    const std::size_t blocks = (n + kReduceBlock - 1) / kReduceBlock;
    if (blocks <= 1) {
        return kl_table_serial(p, q);
    }
    std::vector<double> partial(blocks, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (n >= kParallelGrain)
#endif
    for (long long b = 0; b < static_cast<long long>(blocks); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kReduceBlock;
        const std::size_t hi = lo + kReduceBlock < n ? lo + kReduceBlock : n;
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += kl_term(p[i], q[i]);
        partial[static_cast<std::size_t>(b)] = s;
    }
    double s = 0.0;
    for (double x : partial) s += x;
    return s;
}

double kl_table_serial(std::span<const double> p, std::span<const double> q) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += kl_term(p[i], q[i]);
    return s;
}

void mix_tables(std::span<const double> weights,
                std::span<const std::span<const double>> tables,
                std::span<double> out) {
    const long long n = static_cast<long long>(out.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (out.size() >= kParallelGrain)
#endif
    for (long long i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < weights.size(); ++k) {
            s += weights[k] * tables[k][static_cast<std::size_t>(i)];
        }
        out[static_cast<std::size_t>(i)] = s;
    }
}

void mix_tables_serial(std::span<const double> weights,
                       std::span<const std::span<const double>> tables,
                       std::span<double> out) {
    for (std::size_t i = 0; i < out.size(); ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < weights.size(); ++k) s += weights[k] * tables[k][i];
        out[i] = s;
    }
}

} // namespace bnpool
