#pragma once

#include <span>
#include <vector>

#include "bnpool/factor.hpp"
#include "bnpool/network.hpp"

namespace bnpool {

// Exact marginal over `targets` by variable elimination (min-degree order on
// the moralized graph, ties by node index). Equals
// marginalize(full_joint(net), targets) whenever that is computable.
Factor marginal(const BayesNet& net, std::vector<int> targets,
                std::size_t max_entries = kStateSpaceLimit);

// Extracts P(child | parents) from a joint distribution over exactly
// {child} + parents by Bayes law; parent rows of zero mass become uniform.
Cpt conditional_from_marginals(const Factor& joint, int child, const std::vector<int>& parents);

// KL(p || q) in bits, computed by family decomposition:
//   sum_i E_p[log2 p(x_i | pa_i^p)] - sum_j E_p[log2 q(x_j | pa_j^q)]
// with every expectation taken under exact marginals of p. Returns
// +infinity when p assigns positive mass where q assigns zero.
double kl_divergence(const BayesNet& p, const BayesNet& q);

// KL between two factors over the identical scope, in bits.
double kl_divergence(const Factor& p, const Factor& q);

} // namespace bnpool
