#pragma once

#include <span>
#include <vector>

#include "bnpool/types.hpp"

namespace bnpool {

// A dense nonnegative table over an ordered subset of variables. The scope is
// kept strictly increasing by variable index; entries are enumerated with the
// last scope variable varying fastest.
class Factor {
public:
    Factor() = default;
    Factor(std::vector<int> scope, std::vector<int> cards, std::vector<double> values);

    // Scope-less factor holding a single value.
    static Factor scalar(double value);

    const std::vector<int>& scope() const { return scope_; }
    const std::vector<int>& cards() const { return cards_; }
    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }
    std::vector<double>& mutable_values() { return values_; }

    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

    IndexSpace index_space() const { return IndexSpace{cards_}; }

    // Total mass, computed with the deterministic blocked reduction.
    double total() const;
    bool is_distribution(double tol = 1e-9) const;

    // Sums out every variable not in `keep`; preserves total mass.
    // Parallel over entries of the result.
    Factor marginalize(const std::vector<int>& keep) const;
    // Reference implementation: one serial pass over the input table.
    Factor marginalize_serial(const std::vector<int>& keep) const;

    // Pointwise product over the union scope.
    Factor multiply(const Factor& other, std::size_t max_entries = kStateSpaceLimit) const;

    Factor sum_out(int var) const;

    // Scales values to total mass 1. Never applied implicitly anywhere;
    // callers that need repair must ask for it.
    void normalize();

    bool operator==(const Factor&) const = default;

private:
    std::vector<int> scope_;
    std::vector<int> cards_;
    std::vector<double> values_;
};

} // namespace bnpool
