#pragma once

#include <span>
#include <vector>

namespace bnpool {

// Dense-table kernels shared by KL evaluation and opinion pooling. Each has
// an OpenMP path and a plain serial reference twin; the parallel results are
// schedule-independent by construction (blocked reductions, pure maps), so
// tests can pin them against the references.

// sum_i p[i] * log2(p[i]/q[i]) with 0 log 0 := 0; +infinity when some
// p[i] > 0 has q[i] == 0. Inputs must be equal-length distributions.
double kl_table(std::span<const double> p, std::span<const double> q);
double kl_table_serial(std::span<const double> p, std::span<const double> q);

// out[i] = sum_k weights[k] * tables[k][i]. All tables equal length.
void mix_tables(std::span<const double> weights,
                std::span<const std::span<const double>> tables,
                std::span<double> out);
void mix_tables_serial(std::span<const double> weights,
                       std::span<const std::span<const double>> tables,
                       std::span<double> out);

} // namespace bnpool
