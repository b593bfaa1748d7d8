#include "bnpool/types.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace bnpool {

bool check_variables(std::span<const Variable> vars, std::vector<std::string>& violations) {
    const std::size_t before = violations.size();
    std::set<std::string> names;
    for (const auto& v : vars) {
        if (v.name.empty()) {
            violations.push_back("variable with empty name");
        }
        if (!names.insert(v.name).second) {
            violations.push_back("duplicate variable name '" + v.name + "'");
        }
        if (v.states.size() < 2) {
            violations.push_back("variable '" + v.name + "' has cardinality " +
                                 std::to_string(v.states.size()) + " (need >= 2)");
        }
        std::set<std::string> labels;
        for (const auto& s : v.states) {
            if (!labels.insert(s).second) {
                violations.push_back("variable '" + v.name + "' repeats state label '" + s + "'");
            }
        }
    }
    return violations.size() == before;
}

void require_valid_variables(std::span<const Variable> vars) {
    std::vector<std::string> violations;
    if (!check_variables(vars, violations)) {
        throw ValidationError(std::move(violations));
    }
}

Dag::Dag(int node_count, const std::vector<std::pair<int, int>>& edges) : Dag(node_count) {
    for (const auto& [from, to] : edges) {
        add_edge(from, to);
    }
}

void Dag::check_node(int v) const {
    if (v < 0 || v >= n_) {
        throw UnknownVariable("node index " + std::to_string(v) + " out of range [0, " +
                              std::to_string(n_) + ")");
    }
}

int Dag::edge_count() const {
    int total = 0;
    for (const auto& ps : parents_) total += static_cast<int>(ps.size());
    return total;
}

bool Dag::has_edge(int from, int to) const {
    check_node(from);
    check_node(to);
    const auto& ps = parents_[static_cast<std::size_t>(to)];
    return std::binary_search(ps.begin(), ps.end(), from);
}

std::vector<std::pair<int, int>> Dag::edges() const {
    std::vector<std::pair<int, int>> es;
    for (int child = 0; child < n_; ++child) {
        for (int parent : parents_[static_cast<std::size_t>(child)]) {
            es.emplace_back(parent, child);
        }
    }
    std::sort(es.begin(), es.end());
    return es;
}

void Dag::add_edge(int from, int to) {
    check_node(from);
    check_node(to);
    if (from == to) {
        throw Error("self-loop on node " + std::to_string(from));
    }
    auto& ps = parents_[static_cast<std::size_t>(to)];
    auto it = std::lower_bound(ps.begin(), ps.end(), from);
    if (it != ps.end() && *it == from) {
        throw Error("duplicate edge " + std::to_string(from) + " -> " + std::to_string(to));
    }
    ps.insert(it, from);
}

void Dag::remove_edge(int from, int to) {
    check_node(from);
    check_node(to);
    auto& ps = parents_[static_cast<std::size_t>(to)];
    auto it = std::lower_bound(ps.begin(), ps.end(), from);
    if (it == ps.end() || *it != from) {
        throw Error("no edge " + std::to_string(from) + " -> " + std::to_string(to));
    }
    ps.erase(it);
}

Dag Dag::with_edge(int from, int to) const {
    Dag d = *this;
    d.add_edge(from, to);
    return d;
}

Dag Dag::without_edge(int from, int to) const {
    Dag d = *this;
    d.remove_edge(from, to);
    return d;
}

Dag Dag::with_reversed(int from, int to) const {
    Dag d = *this;
    d.remove_edge(from, to);
    d.add_edge(to, from);
    return d;
}

bool Dag::path_exists(int from, int to) const {
    check_node(from);
    check_node(to);
    if (from == to) return true;
    // children adjacency, then DFS
    std::vector<std::vector<int>> children(static_cast<std::size_t>(n_));
    for (int child = 0; child < n_; ++child) {
        for (int parent : parents_[static_cast<std::size_t>(child)]) {
            children[static_cast<std::size_t>(parent)].push_back(child);
        }
    }
    std::vector<bool> seen(static_cast<std::size_t>(n_), false);
    std::vector<int> stack{from};
    seen[static_cast<std::size_t>(from)] = true;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int c : children[static_cast<std::size_t>(v)]) {
            if (c == to) return true;
            if (!seen[static_cast<std::size_t>(c)]) {
                seen[static_cast<std::size_t>(c)] = true;
                stack.push_back(c);
            }
        }
    }
    return false;
}

std::vector<int> topological_order(const Dag& dag) {
    const int n = dag.node_count();
    std::vector<int> remaining_parents(static_cast<std::size_t>(n));
    std::vector<std::vector<int>> children(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        remaining_parents[static_cast<std::size_t>(v)] = static_cast<int>(dag.parents(v).size());
        for (int p : dag.parents(v)) {
            children[static_cast<std::size_t>(p)].push_back(v);
        }
    }
    // Kahn's algorithm with an ordered ready set: ties break by node index.
    std::set<int> ready;
    for (int v = 0; v < n; ++v) {
        if (remaining_parents[static_cast<std::size_t>(v)] == 0) ready.insert(v);
    }
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(n));
    while (!ready.empty()) {
        int v = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(v);
        for (int c : children[static_cast<std::size_t>(v)]) {
            if (--remaining_parents[static_cast<std::size_t>(c)] == 0) ready.insert(c);
        }
    }
    if (static_cast<int>(order.size()) != n) {
        throw CycleError("edge set contains a directed cycle");
    }
    return order;
}

void DataSet::push_row(std::span<const int> states) {
    if (states.size() != width_) {
        throw Error("row width " + std::to_string(states.size()) + " != variable count " +
                    std::to_string(width_));
    }
    for (std::size_t k = 0; k < width_; ++k) {
        if (states[k] < 0 || states[k] >= variables_[k].cardinality()) {
            throw Error("state index " + std::to_string(states[k]) + " out of range for variable '" +
                        variables_[k].name + "'");
        }
    }
    data_.insert(data_.end(), states.begin(), states.end());
}

int DataSet::var_index(std::string_view name) const {
    for (std::size_t i = 0; i < variables_.size(); ++i) {
        if (variables_[i].name == name) return static_cast<int>(i);
    }
    return -1;
}

} // namespace bnpool
