#include "bnpool/sampling.hpp"

#include <algorithm>

#include "bnpool/parallel.hpp"

namespace bnpool {

namespace {

struct SamplePlan {
    std::vector<int> order;               // topological
    std::vector<IndexSpace> row_spaces;   // per node, over its parents
};

SamplePlan make_plan(const BayesNet& net) {
    SamplePlan plan;
    plan.order = topological_order(net.dag);
    plan.row_spaces.resize(net.variables.size());
    for (int i = 0; i < net.node_count(); ++i) {
        std::vector<int> pc;
        for (int p : net.cpts[static_cast<std::size_t>(i)].parents) {
            pc.push_back(net.variables[static_cast<std::size_t>(p)].cardinality());
        }
        plan.row_spaces[static_cast<std::size_t>(i)] = IndexSpace{std::move(pc)};
    }
    return plan;
}

void sample_row(const BayesNet& net, const SamplePlan& plan, SeededRng row_rng, std::span<int> out) {
    std::vector<int> row_assign;
    for (int node : plan.order) {
        const Cpt& cpt = net.cpts[static_cast<std::size_t>(node)];
        row_assign.clear();
        for (int p : cpt.parents) row_assign.push_back(out[static_cast<std::size_t>(p)]);
        const std::size_t row = plan.row_spaces[static_cast<std::size_t>(node)].index_of(row_assign);
        const std::span<const double> dist{cpt.table.data() + row * static_cast<std::size_t>(cpt.child_card),
                                           static_cast<std::size_t>(cpt.child_card)};
        out[static_cast<std::size_t>(node)] = row_rng.next_categorical(dist);
    }
}

} // namespace

DataSet forward_sample(const BayesNet& net, std::size_t m, const SeededRng& rng) {
    const SamplePlan plan = make_plan(net);
    const std::size_t width = net.variables.size();
    std::vector<int> data(m * width);
    const long long rows = static_cast<long long>(m);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (m * width >= kParallelGrain)
#endif
    for (long long r = 0; r < rows; ++r) {
        sample_row(net, plan, rng.split(static_cast<std::uint64_t>(r)),
                   {data.data() + static_cast<std::size_t>(r) * width, width});
    }
    DataSet ds(net.variables);
    ds.reserve(m);
    for (std::size_t r = 0; r < m; ++r) {
        ds.push_row({data.data() + r * width, width});
    }
    return ds;
}

DataSet forward_sample_serial(const BayesNet& net, std::size_t m, const SeededRng& rng) {
    const SamplePlan plan = make_plan(net);
    const std::size_t width = net.variables.size();
    DataSet ds(net.variables);
    ds.reserve(m);
    std::vector<int> row(width);
    for (std::size_t r = 0; r < m; ++r) {
        sample_row(net, plan, rng.split(r), row);
        ds.push_row(row);
    }
    return ds;
}

std::vector<DataSet> partition_by_variable(const DataSet& ds, int var) {
    const int n = static_cast<int>(ds.var_count());
    if (var < 0 || var >= n) {
        throw UnknownVariable("partition variable index " + std::to_string(var) + " out of range");
    }
    std::vector<Variable> rest;
    for (int k = 0; k < n; ++k) {
        if (k != var) rest.push_back(ds.variables()[static_cast<std::size_t>(k)]);
    }
    const int card = ds.variables()[static_cast<std::size_t>(var)].cardinality();
    std::vector<DataSet> parts(static_cast<std::size_t>(card), DataSet(rest));

    std::vector<int> row(static_cast<std::size_t>(n) - 1);
    for (std::size_t r = 0; r < ds.size(); ++r) {
        std::size_t k = 0;
        for (int v = 0; v < n; ++v) {
            if (v != var) row[k++] = ds.at(r, v);
        }
        parts[static_cast<std::size_t>(ds.at(r, var))].push_row(row);
    }
    return parts;
}

Factor count_distribution(const DataSet& ds) {
    if (ds.size() == 0) {
        throw EmptyDataSet("dataset holds no rows");
    }
    const int n = static_cast<int>(ds.var_count());
    std::vector<int> scope(static_cast<std::size_t>(n));
    std::vector<int> cards(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        scope[static_cast<std::size_t>(k)] = k;
        cards[static_cast<std::size_t>(k)] = ds.variables()[static_cast<std::size_t>(k)].cardinality();
    }
    IndexSpace space{cards};
    std::vector<double> counts(space.size(), 0.0);
    for (std::size_t r = 0; r < ds.size(); ++r) {
        counts[space.index_of(ds.row(r))] += 1.0;
    }
    return Factor(std::move(scope), std::move(cards), std::move(counts));
}

Factor empirical_distribution(const DataSet& ds) {
    Factor f = count_distribution(ds);
    const double m = static_cast<double>(ds.size());
    for (auto& v : f.mutable_values()) v /= m;
    return f;
}

} // namespace bnpool
