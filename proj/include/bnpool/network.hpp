#pragma once

#include <string_view>
#include <vector>

#include "bnpool/factor.hpp"
#include "bnpool/types.hpp"

namespace bnpool {

// A Bayesian network: DAG over named discrete variables plus one CPT per
// node. cpts[i].parents always equals the dag's parent set of node i.
struct BayesNet {
    std::vector<Variable> variables;
    Dag dag;
    std::vector<Cpt> cpts;

    int node_count() const { return static_cast<int>(variables.size()); }
    int var_index(std::string_view name) const;
    // Throwing lookup.
    int require_var(std::string_view name) const;

    bool operator==(const BayesNet&) const = default;
};

// Checks every structural invariant (cardinalities, acyclicity, parent sets,
// row normalization within 1e-9) and reports all violations at once.
void validate_network(const BayesNet& net);

// The CPT of `node` as a factor over the sorted family scope.
Factor cpt_factor(const BayesNet& net, int node);

// Expands the full joint distribution: entry(w) = prod_i P(x_i | pa_i).
// Parallel over world indices.
Factor full_joint(const BayesNet& net, std::size_t max_entries = kStateSpaceLimit);
// Reference implementation via a chain of factor products.
Factor full_joint_serial(const BayesNet& net, std::size_t max_entries = kStateSpaceLimit);

// Reorders `net`'s variables (and state labels) to match `reference`'s
// naming. Throws VariableMismatch when the variable sets or state-label sets
// differ.
BayesNet align_variables(const std::vector<Variable>& reference, const BayesNet& net);

} // namespace bnpool
