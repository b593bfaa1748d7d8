#include "bnpool/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "bnpool/kernels.hpp"

namespace bnpool {

namespace {

// Min-degree elimination order over the variables NOT in targets, on the
// moralized interaction graph induced by the factor scopes.
std::vector<int> elimination_order(const std::vector<Factor>& factors, const std::set<int>& keep, int n) {
    std::vector<std::set<int>> adj(static_cast<std::size_t>(n));
    for (const auto& f : factors) {
        for (int a : f.scope()) {
            for (int b : f.scope()) {
                if (a != b) adj[static_cast<std::size_t>(a)].insert(b);
            }
        }
    }
    std::set<int> pending;
    for (int v = 0; v < n; ++v) {
        if (!keep.count(v)) pending.insert(v);
    }
    std::vector<int> order;
    order.reserve(pending.size());
    while (!pending.empty()) {
        int best = -1;
        std::size_t best_degree = 0;
        for (int v : pending) {
            std::size_t d = 0;
            for (int u : adj[static_cast<std::size_t>(v)]) {
                if (u != v && (pending.count(u) || keep.count(u))) ++d;
            }
            if (best < 0 || d < best_degree) {
                best = v;
                best_degree = d;
            }
        }
        order.push_back(best);
        // connect the eliminated node's remaining neighbors
        std::vector<int> nbrs;
        for (int u : adj[static_cast<std::size_t>(best)]) {
            if (u != best && (pending.count(u) || keep.count(u))) nbrs.push_back(u);
        }
        for (int a : nbrs) {
            for (int b : nbrs) {
                if (a != b) adj[static_cast<std::size_t>(a)].insert(b);
            }
            adj[static_cast<std::size_t>(a)].erase(best);
        }
        pending.erase(best);
    }
    return order;
}

} // namespace

Factor marginal(const BayesNet& net, std::vector<int> targets, std::size_t max_entries) {
    if (targets.empty()) {
        throw UnknownVariable("marginal requires at least one target variable");
    }
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    for (int t : targets) {
        if (t < 0 || t >= net.node_count()) {
            throw UnknownVariable("target index " + std::to_string(t) + " out of range");
        }
    }

    std::vector<Factor> factors;
    factors.reserve(net.variables.size());
    for (int i = 0; i < net.node_count(); ++i) {
        factors.push_back(cpt_factor(net, i));
    }
    const std::set<int> keep(targets.begin(), targets.end());
    const std::vector<int> order = elimination_order(factors, keep, net.node_count());

    for (int v : order) {
        Factor combined = Factor::scalar(1.0);
        std::vector<Factor> rest;
        rest.reserve(factors.size());
        for (auto& f : factors) {
            const auto& sc = f.scope();
            if (std::binary_search(sc.begin(), sc.end(), v)) {
                combined = combined.multiply(f, max_entries);
            } else {
                rest.push_back(std::move(f));
            }
        }
        rest.push_back(combined.sum_out(v));
        factors = std::move(rest);
    }

    Factor result = Factor::scalar(1.0);
    for (const auto& f : factors) {
        result = result.multiply(f, max_entries);
    }
    return result;
}

Cpt conditional_from_marginals(const Factor& joint, int child, const std::vector<int>& parents) {
    std::vector<int> scope = parents;
    scope.push_back(child);
    std::sort(scope.begin(), scope.end());
    if (scope != joint.scope()) {
        throw ScopeMismatch("joint scope must equal {child} + parents");
    }

    // cardinalities by variable index within the joint
    auto card_of = [&joint](int v) {
        auto it = std::lower_bound(joint.scope().begin(), joint.scope().end(), v);
        return joint.cards()[static_cast<std::size_t>(it - joint.scope().begin())];
    };

    Cpt cpt;
    cpt.child = child;
    cpt.parents = parents;
    std::sort(cpt.parents.begin(), cpt.parents.end());
    cpt.child_card = card_of(child);

    std::vector<int> parent_cards;
    for (int p : cpt.parents) parent_cards.push_back(card_of(p));
    IndexSpace rows{parent_cards};

    const IndexSpace space = joint.index_space();
    // position of each scope variable: parent slots and the child slot
    std::vector<std::size_t> parent_pos;
    std::size_t child_pos = 0;
    for (std::size_t k = 0; k < joint.scope().size(); ++k) {
        if (joint.scope()[k] == child) child_pos = k;
    }
    for (int p : cpt.parents) {
        auto it = std::lower_bound(joint.scope().begin(), joint.scope().end(), p);
        parent_pos.push_back(static_cast<std::size_t>(it - joint.scope().begin()));
    }

    cpt.table.assign(rows.size() * static_cast<std::size_t>(cpt.child_card), 0.0);
    std::vector<int> row_assign(cpt.parents.size());
    std::vector<int> assign(joint.scope().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        rows.assignment_of(r, row_assign);
        for (std::size_t k = 0; k < parent_pos.size(); ++k) assign[parent_pos[k]] = row_assign[k];
        double mass = 0.0;
        for (int s = 0; s < cpt.child_card; ++s) {
            assign[child_pos] = s;
            mass += joint[space.index_of(assign)];
        }
        for (int s = 0; s < cpt.child_card; ++s) {
            assign[child_pos] = s;
            const double v = mass > 0.0 ? joint[space.index_of(assign)] / mass
                                        : 1.0 / static_cast<double>(cpt.child_card);
            cpt.table[r * static_cast<std::size_t>(cpt.child_card) + static_cast<std::size_t>(s)] = v;
        }
    }
    return cpt;
}

namespace {

// E_p[log2 cpt(child | parents)] where the expectation runs over the exact
// marginal of p on the cpt's family. Returns -infinity only via the caller's
// sign convention: a +infinity KL arises when mass > 0 meets a zero entry.
double expected_log_cpt(const BayesNet& p, const Cpt& cpt, const std::vector<int>& cards) {
    std::vector<int> family = cpt.parents;
    family.push_back(cpt.child);
    std::sort(family.begin(), family.end());
    const Factor fam = marginal(p, family);

    const IndexSpace space = fam.index_space();
    std::vector<int> parent_cards;
    for (int par : cpt.parents) parent_cards.push_back(cards[static_cast<std::size_t>(par)]);
    IndexSpace rows{parent_cards};

    std::vector<std::size_t> parent_pos;
    std::size_t child_pos = 0;
    for (std::size_t k = 0; k < fam.scope().size(); ++k) {
        if (fam.scope()[k] == cpt.child) child_pos = k;
    }
    for (int par : cpt.parents) {
        auto it = std::lower_bound(fam.scope().begin(), fam.scope().end(), par);
        parent_pos.push_back(static_cast<std::size_t>(it - fam.scope().begin()));
    }

    double acc = 0.0;
    std::vector<int> assign(fam.scope().size());
    std::vector<int> row_assign(cpt.parents.size());
    for (std::size_t i = 0; i < fam.size(); ++i) {
        const double mass = fam[i];
        if (mass <= 0.0) continue; // 0 log 0 := 0
        space.assignment_of(i, assign);
        for (std::size_t k = 0; k < parent_pos.size(); ++k) row_assign[k] = assign[parent_pos[k]];
        const double cond = cpt.at(rows.index_of(row_assign), assign[child_pos]);
        if (cond <= 0.0) {
            return -std::numeric_limits<double>::infinity();
        }
        acc += mass * std::log2(cond);
    }
    return acc;
}

} // namespace

double kl_divergence(const BayesNet& p, const BayesNet& q) {
    if (p.variables != q.variables) {
        throw VariableMismatch("KL requires identical variable lists");
    }
    std::vector<int> cards;
    for (const auto& v : p.variables) cards.push_back(v.cardinality());

    double kl = 0.0;
    for (const auto& cpt : p.cpts) {
        const double e = expected_log_cpt(p, cpt, cards);
        // p's own conditionals cannot be zero where p has mass
        kl += e;
    }
    for (const auto& cpt : q.cpts) {
        const double e = expected_log_cpt(p, cpt, cards);
        if (std::isinf(e)) {
            return std::numeric_limits<double>::infinity();
        }
        kl -= e;
    }
    // guard against -0 noise
    return kl;
}

double kl_divergence(const Factor& p, const Factor& q) {
    if (p.scope() != q.scope() || p.cards() != q.cards()) {
        throw ScopeMismatch("KL requires factors over the identical scope");
    }
    return kl_table(p.values(), q.values());
}

} // namespace bnpool
