#include "bnpool/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bnpool/parallel.hpp"

namespace bnpool {

int BayesNet::var_index(std::string_view name) const {
    for (std::size_t i = 0; i < variables.size(); ++i) {
        if (variables[i].name == name) return static_cast<int>(i);
    }
    return -1;
}

int BayesNet::require_var(std::string_view name) const {
    const int i = var_index(name);
    if (i < 0) {
        throw UnknownVariable("no variable named '" + std::string(name) + "'");
    }
    return i;
}

void validate_network(const BayesNet& net) {
    std::vector<std::string> violations;
    check_variables(net.variables, violations);

    const int n = net.node_count();
    if (net.dag.node_count() != n) {
        violations.push_back("dag has " + std::to_string(net.dag.node_count()) + " nodes, network has " +
                             std::to_string(n) + " variables");
    }
    if (static_cast<int>(net.cpts.size()) != n) {
        violations.push_back("network has " + std::to_string(net.cpts.size()) + " CPTs for " +
                             std::to_string(n) + " variables");
    }

    bool acyclic = true;
    if (net.dag.node_count() == n) {
        try {
            topological_order(net.dag);
        } catch (const CycleError&) {
            acyclic = false;
            violations.push_back("dag contains a directed cycle");
        }
    }

    const std::size_t limit = std::min(net.cpts.size(), static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < limit; ++i) {
        const Cpt& cpt = net.cpts[i];
        const std::string& name = net.variables[i].name;
        if (cpt.child != static_cast<int>(i)) {
            violations.push_back("cpt " + std::to_string(i) + " declares child " +
                                 std::to_string(cpt.child));
            continue;
        }
        if (net.dag.node_count() == n && cpt.parents != net.dag.parents(static_cast<int>(i))) {
            violations.push_back("parent mismatch at node '" + name +
                                 "': cpt parents differ from dag parents");
            continue;
        }
        if (cpt.child_card != net.variables[i].cardinality()) {
            violations.push_back("cpt for '" + name + "' has row width " + std::to_string(cpt.child_card) +
                                 ", variable has " + std::to_string(net.variables[i].cardinality()) +
                                 " states");
            continue;
        }
        std::size_t rows = 1;
        bool parents_ok = true;
        for (int p : cpt.parents) {
            if (p < 0 || p >= n) {
                violations.push_back("cpt for '" + name + "' names an unknown parent index " +
                                     std::to_string(p));
                parents_ok = false;
                break;
            }
            rows *= static_cast<std::size_t>(net.variables[static_cast<std::size_t>(p)].cardinality());
        }
        if (!parents_ok) continue;
        if (cpt.row_count() != rows) {
            violations.push_back("cpt for '" + name + "' has " + std::to_string(cpt.row_count()) +
                                 " rows, parent state space has " + std::to_string(rows));
            continue;
        }
        for (std::size_t r = 0; r < rows; ++r) {
            double sum = 0.0;
            bool nonneg = true;
            for (int s = 0; s < cpt.child_card; ++s) {
                const double v = cpt.at(r, s);
                if (!(v >= 0.0)) nonneg = false;
                sum += v;
            }
            if (!nonneg) {
                violations.push_back("cpt row " + std::to_string(r) + " of '" + name +
                                     "' holds a negative or NaN entry");
            } else if (std::abs(sum - 1.0) > 1e-9) {
                violations.push_back("row not normalized: cpt row " + std::to_string(r) + " of '" + name +
                                     "' sums to " + std::to_string(sum));
            }
        }
    }
    (void)acyclic;
    if (!violations.empty()) {
        throw ValidationError(std::move(violations));
    }
}

Factor cpt_factor(const BayesNet& net, int node) {
    const Cpt& cpt = net.cpts[static_cast<std::size_t>(node)];
    std::vector<int> scope = cpt.parents;
    scope.push_back(node);
    std::sort(scope.begin(), scope.end());

    std::vector<int> cards;
    cards.reserve(scope.size());
    for (int v : scope) cards.push_back(net.variables[static_cast<std::size_t>(v)].cardinality());

    IndexSpace space{cards};
    IndexSpace row_space{[&] {
        std::vector<int> pc;
        for (int p : cpt.parents) pc.push_back(net.variables[static_cast<std::size_t>(p)].cardinality());
        return pc;
    }()};

    // position of each parent and of the child within the sorted scope
    std::vector<std::size_t> parent_pos;
    std::size_t child_pos = 0;
    for (std::size_t k = 0; k < scope.size(); ++k) {
        if (scope[k] == node) child_pos = k;
    }
    for (int p : cpt.parents) {
        auto it = std::lower_bound(scope.begin(), scope.end(), p);
        parent_pos.push_back(static_cast<std::size_t>(it - scope.begin()));
    }

    std::vector<double> out(space.size());
    std::vector<int> assign(scope.size());
    std::vector<int> row_assign(cpt.parents.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        space.assignment_of(i, assign);
        for (std::size_t k = 0; k < parent_pos.size(); ++k) row_assign[k] = assign[parent_pos[k]];
        const std::size_t row = row_space.index_of(row_assign);
        out[i] = cpt.at(row, assign[child_pos]);
    }
    return Factor(std::move(scope), std::move(cards), std::move(out));
}

namespace {

std::vector<int> all_cards(const BayesNet& net) {
    std::vector<int> cards;
    cards.reserve(net.variables.size());
    for (const auto& v : net.variables) cards.push_back(v.cardinality());
    return cards;
}

void check_joint_size(const BayesNet& net, std::size_t max_entries) {
    std::size_t n = 1;
    for (const auto& v : net.variables) {
        const auto c = static_cast<std::size_t>(v.cardinality());
        if (n > max_entries / c) {
            throw StateSpaceTooLarge("full joint exceeds the state-space limit of " +
                                     std::to_string(max_entries) + " entries");
        }
        n *= c;
    }
}

} // namespace

Factor full_joint(const BayesNet& net, std::size_t max_entries) {
    check_joint_size(net, max_entries);
    const int n = net.node_count();
    std::vector<int> cards = all_cards(net);
    IndexSpace space{cards};

    // Per-node row spaces, reused across worlds.
    std::vector<IndexSpace> row_spaces(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        std::vector<int> pc;
        for (int p : net.cpts[static_cast<std::size_t>(i)].parents) {
            pc.push_back(net.variables[static_cast<std::size_t>(p)].cardinality());
        }
        row_spaces[static_cast<std::size_t>(i)] = IndexSpace{std::move(pc)};
    }

    std::vector<double> out(space.size());
    const long long total = static_cast<long long>(out.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (out.size() >= kParallelGrain)
#endif
    for (long long w = 0; w < total; ++w) {
        std::vector<int> world(static_cast<std::size_t>(n));
        space.assignment_of(static_cast<std::size_t>(w), world);
        double p = 1.0;
        std::vector<int> row_assign;
        for (int i = 0; i < n; ++i) {
            const Cpt& cpt = net.cpts[static_cast<std::size_t>(i)];
            row_assign.clear();
            for (int par : cpt.parents) row_assign.push_back(world[static_cast<std::size_t>(par)]);
            const std::size_t row = row_spaces[static_cast<std::size_t>(i)].index_of(row_assign);
            p *= cpt.at(row, world[static_cast<std::size_t>(i)]);
        }
        out[static_cast<std::size_t>(w)] = p;
    }

    std::vector<int> scope(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) scope[static_cast<std::size_t>(i)] = i;
    return Factor(std::move(scope), std::move(cards), std::move(out));
}

Factor full_joint_serial(const BayesNet& net, std::size_t max_entries) {
    check_joint_size(net, max_entries);
    Factor acc = Factor::scalar(1.0);
    for (int i = 0; i < net.node_count(); ++i) {
        acc = acc.multiply(cpt_factor(net, i), max_entries);
    }
    return acc;
}

BayesNet align_variables(const std::vector<Variable>& reference, const BayesNet& net) {
    const int n = static_cast<int>(reference.size());
    if (net.node_count() != n) {
        throw VariableMismatch("networks define different variable counts");
    }
    // old index of each reference variable, plus per-variable state permutation
    std::vector<int> old_of_new(static_cast<std::size_t>(n));
    std::vector<std::vector<int>> state_map(static_cast<std::size_t>(n)); // new state -> old state
    for (int i = 0; i < n; ++i) {
        const Variable& ref = reference[static_cast<std::size_t>(i)];
        const int j = net.var_index(ref.name);
        if (j < 0) {
            throw VariableMismatch("variable '" + ref.name + "' missing from network");
        }
        const Variable& got = net.variables[static_cast<std::size_t>(j)];
        if (got.states.size() != ref.states.size()) {
            throw VariableMismatch("variable '" + ref.name + "' has differing cardinality");
        }
        std::vector<int> sm(ref.states.size());
        for (std::size_t s = 0; s < ref.states.size(); ++s) {
            const int t = got.state_index(ref.states[s]);
            if (t < 0) {
                throw VariableMismatch("variable '" + ref.name + "' lacks state '" + ref.states[s] + "'");
            }
            sm[s] = t;
        }
        old_of_new[static_cast<std::size_t>(i)] = j;
        state_map[static_cast<std::size_t>(i)] = std::move(sm);
    }

    std::vector<int> new_of_old(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) new_of_old[static_cast<std::size_t>(old_of_new[static_cast<std::size_t>(i)])] = i;

    BayesNet out;
    out.variables = reference;
    out.dag = Dag(n);
    for (const auto& [from, to] : net.dag.edges()) {
        out.dag.add_edge(new_of_old[static_cast<std::size_t>(from)], new_of_old[static_cast<std::size_t>(to)]);
    }
    out.cpts.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const int j = old_of_new[static_cast<std::size_t>(i)];
        const Cpt& src = net.cpts[static_cast<std::size_t>(j)];
        Cpt dst;
        dst.child = i;
        dst.parents = out.dag.parents(i);
        dst.child_card = reference[static_cast<std::size_t>(i)].cardinality();

        // old-index parents in the source's order
        std::vector<int> src_parent_cards;
        for (int p : src.parents) {
            src_parent_cards.push_back(net.variables[static_cast<std::size_t>(p)].cardinality());
        }
        IndexSpace src_rows{src_parent_cards};

        std::vector<int> dst_parent_cards;
        for (int p : dst.parents) {
            dst_parent_cards.push_back(reference[static_cast<std::size_t>(p)].cardinality());
        }
        IndexSpace dst_rows{dst_parent_cards};

        dst.table.assign(dst_rows.size() * static_cast<std::size_t>(dst.child_card), 0.0);
        std::vector<int> dst_assign(dst.parents.size());
        std::vector<int> src_assign(src.parents.size());
        for (std::size_t r = 0; r < dst_rows.size(); ++r) {
            dst_rows.assignment_of(r, dst_assign);
            // translate each new-parent state to the source's parent slot and label order
            for (std::size_t k = 0; k < dst.parents.size(); ++k) {
                const int new_parent = dst.parents[k];
                const int old_parent = old_of_new[static_cast<std::size_t>(new_parent)];
                std::size_t slot = 0;
                for (std::size_t q = 0; q < src.parents.size(); ++q) {
                    if (src.parents[q] == old_parent) slot = q;
                }
                src_assign[slot] = state_map[static_cast<std::size_t>(new_parent)][static_cast<std::size_t>(dst_assign[k])];
            }
            const std::size_t src_row = src_rows.index_of(src_assign);
            for (int s = 0; s < dst.child_card; ++s) {
                dst.table[r * static_cast<std::size_t>(dst.child_card) + static_cast<std::size_t>(s)] =
                    src.at(src_row, state_map[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)]);
            }
        }
        out.cpts[static_cast<std::size_t>(i)] = std::move(dst);
    }
    return out;
}

} // namespace bnpool
