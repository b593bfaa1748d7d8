#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bnpool/errors.hpp"

namespace bnpool {

// Dense tables over joint assignments are capped at this many entries by
// default, so an accidental full-joint expansion of a large network fails
// fast instead of exhausting memory.
inline constexpr std::size_t kStateSpaceLimit = std::size_t{1} << 22;

// A named discrete variable with an ordered list of state labels.
struct Variable {
    std::string name;
    std::vector<std::string> states;

    int cardinality() const { return static_cast<int>(states.size()); }

    // Index of a state label, or -1.
    int state_index(std::string_view label) const {
        for (std::size_t i = 0; i < states.size(); ++i) {
            if (states[i] == label) return static_cast<int>(i);
        }
        return -1;
    }

    bool operator==(const Variable&) const = default;
};

// Checks name uniqueness, label uniqueness and cardinality >= 2.
// Appends one message per violation; returns true when clean.
bool check_variables(std::span<const Variable> vars, std::vector<std::string>& violations);

// Throwing convenience wrapper around check_variables.
void require_valid_variables(std::span<const Variable> vars);

// Mixed-radix indexing over an ordered list of cardinalities. The LAST
// position varies fastest; this convention is frozen project-wide (CPT rows,
// factor tables, file formats all use it).
struct IndexSpace {
    std::vector<int> cards;

    std::size_t size() const {
        std::size_t n = 1;
        for (int c : cards) n *= static_cast<std::size_t>(c);
        return n;
    }

    std::size_t index_of(std::span<const int> assignment) const {
        std::size_t idx = 0;
        for (std::size_t k = 0; k < cards.size(); ++k) {
            idx = idx * static_cast<std::size_t>(cards[k]) + static_cast<std::size_t>(assignment[k]);
        }
        return idx;
    }

    void assignment_of(std::size_t index, std::span<int> out) const {
        for (std::size_t k = cards.size(); k-- > 0;) {
            const auto c = static_cast<std::size_t>(cards[k]);
            out[k] = static_cast<int>(index % c);
            index /= c;
        }
    }

    // Strides such that index = sum(assignment[k] * strides[k]).
    std::vector<std::size_t> strides() const {
        std::vector<std::size_t> s(cards.size(), 1);
        for (std::size_t k = cards.size(); k-- > 1;) {
            s[k - 1] = s[k] * static_cast<std::size_t>(cards[k]);
        }
        return s;
    }
};

// A directed graph over node indices 0..n-1. May transiently hold a cycle
// (topological_order reports it); no self-loops or duplicate edges ever.
class Dag {
public:
    Dag() : n_(0) {}
    explicit Dag(int node_count) : n_(node_count), parents_(static_cast<std::size_t>(node_count)) {}
    Dag(int node_count, const std::vector<std::pair<int, int>>& edges);

    int node_count() const { return n_; }
    int edge_count() const;
    bool has_edge(int from, int to) const;
    const std::vector<int>& parents(int node) const { return parents_[static_cast<std::size_t>(node)]; }

    // Edges sorted by (from, to).
    std::vector<std::pair<int, int>> edges() const;

    void add_edge(int from, int to);
    void remove_edge(int from, int to);

    Dag with_edge(int from, int to) const;
    Dag without_edge(int from, int to) const;
    Dag with_reversed(int from, int to) const;

    // True if a directed path from -> to exists.
    bool path_exists(int from, int to) const;

    bool operator==(const Dag&) const = default;

private:
    void check_node(int v) const;

    int n_;
    std::vector<std::vector<int>> parents_; // ascending node index
};

// Parents before children; ties broken by ascending node index.
// Throws CycleError when the edge set is cyclic.
std::vector<int> topological_order(const Dag& dag);

// Conditional probability table for one node. Rows are enumerated
// lexicographically over the parents list with the last parent varying
// fastest; each row is a distribution over the child's states.
struct Cpt {
    int child = -1;
    std::vector<int> parents;  // ascending node index
    int child_card = 0;
    std::vector<double> table; // row-major, row_count() x child_card

    std::size_t row_count() const {
        return child_card > 0 ? table.size() / static_cast<std::size_t>(child_card) : 0;
    }
    double at(std::size_t row, int child_state) const {
        return table[row * static_cast<std::size_t>(child_card) + static_cast<std::size_t>(child_state)];
    }
};

// Complete discrete samples over a fixed variable list. Rows store state
// indices; labels appear only at serialization.
class DataSet {
public:
    DataSet() = default;
    explicit DataSet(std::vector<Variable> variables)
        : variables_(std::move(variables)), width_(variables_.size()) {}

    const std::vector<Variable>& variables() const { return variables_; }
    std::size_t size() const { return width_ == 0 ? 0 : data_.size() / width_; }
    std::size_t var_count() const { return width_; }

    int at(std::size_t row, int var) const {
        return data_[row * width_ + static_cast<std::size_t>(var)];
    }
    std::span<const int> row(std::size_t r) const {
        return {data_.data() + r * width_, width_};
    }

    void push_row(std::span<const int> states);
    void reserve(std::size_t rows) { data_.reserve(rows * width_); }

    int var_index(std::string_view name) const;

    bool operator==(const DataSet&) const = default;

private:
    std::vector<Variable> variables_;
    std::size_t width_ = 0;
    std::vector<int> data_;
};

} // namespace bnpool
