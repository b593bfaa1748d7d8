#pragma once

#include <vector>

#include "bnpool/factor.hpp"
#include "bnpool/network.hpp"
#include "bnpool/rng.hpp"
#include "bnpool/types.hpp"

namespace bnpool {

// Draws m complete IID rows by ancestral sampling. Row r uses the substream
// rng.split(r), so the output is bit-identical for a given (net, m, seed)
// regardless of thread count. Parallel over rows.
DataSet forward_sample(const BayesNet& net, std::size_t m, const SeededRng& rng);
// Reference implementation: same substream layout, plain loop.
DataSet forward_sample_serial(const BayesNet& net, std::size_t m, const SeededRng& rng);

// Routes rows by their state of `var` and drops that column. The result has
// one part per state of `var` (possibly empty); part sizes sum to ds.size().
std::vector<DataSet> partition_by_variable(const DataSet& ds, int var);

// Frequency distribution over all variables: entry(w) = count(w) / M.
Factor empirical_distribution(const DataSet& ds);

// Count table over all variables (integer-valued entries summing to M).
Factor count_distribution(const DataSet& ds);

} // namespace bnpool
