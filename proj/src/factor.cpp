#include "bnpool/factor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bnpool/parallel.hpp"

namespace bnpool {

Factor::Factor(std::vector<int> scope, std::vector<int> cards, std::vector<double> values)
    : scope_(std::move(scope)), cards_(std::move(cards)), values_(std::move(values)) {
    if (scope_.size() != cards_.size()) {
        throw ScopeMismatch("scope and cardinality lists differ in length");
    }
    for (std::size_t k = 1; k < scope_.size(); ++k) {
        if (scope_[k - 1] >= scope_[k]) {
            throw ScopeMismatch("factor scope must be strictly increasing by variable index");
        }
    }
    std::size_t expect = 1;
    for (int c : cards_) {
        if (c < 1) throw ScopeMismatch("nonpositive cardinality in factor");
        expect *= static_cast<std::size_t>(c);
    }
    if (values_.size() != expect) {
        throw ScopeMismatch("factor value count " + std::to_string(values_.size()) +
                            " does not match state space of size " + std::to_string(expect));
    }
    for (double v : values_) {
        if (!(v >= 0.0)) {
            throw Error("factor holds a negative or NaN entry");
        }
    }
}

Factor Factor::scalar(double value) {
    return Factor({}, {}, {value});
}

double Factor::total() const {
    return blocked_sum(values_);
}

bool Factor::is_distribution(double tol) const {
    return std::abs(total() - 1.0) <= tol;
}

namespace {

// Positions of `keep` inside `scope`; throws when a kept variable is missing.
std::vector<std::size_t> keep_positions(const std::vector<int>& scope, std::vector<int> keep) {
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    std::vector<std::size_t> pos;
    pos.reserve(keep.size());
    for (int v : keep) {
        auto it = std::lower_bound(scope.begin(), scope.end(), v);
        if (it == scope.end() || *it != v) {
            throw UnknownVariable("variable " + std::to_string(v) + " not in factor scope");
        }
        pos.push_back(static_cast<std::size_t>(it - scope.begin()));
    }
    return pos;
}

} // namespace

Factor Factor::marginalize(const std::vector<int>& keep) const {
    const auto kept = keep_positions(scope_, keep);
    std::vector<bool> is_kept(scope_.size(), false);
    for (auto p : kept) is_kept[p] = true;

    std::vector<int> out_scope, out_cards;
    for (auto p : kept) {
        out_scope.push_back(scope_[p]);
        out_cards.push_back(cards_[p]);
    }

    const auto in_strides = index_space().strides();

    // Offsets of every combination of the summed-out variables.
    std::vector<std::size_t> sum_positions;
    for (std::size_t k = 0; k < scope_.size(); ++k) {
        if (!is_kept[k]) sum_positions.push_back(k);
    }
    std::vector<int> sum_cards;
    for (auto p : sum_positions) sum_cards.push_back(cards_[p]);
    IndexSpace sum_space{sum_cards};
    std::vector<std::size_t> offsets(sum_space.size());
    {
        std::vector<int> assign(sum_positions.size());
        for (std::size_t j = 0; j < offsets.size(); ++j) {
            sum_space.assignment_of(j, assign);
            std::size_t off = 0;
            for (std::size_t k = 0; k < sum_positions.size(); ++k) {
                off += static_cast<std::size_t>(assign[k]) * in_strides[sum_positions[k]];
            }
            offsets[j] = off;
        }
    }

    IndexSpace out_space{out_cards};
    std::vector<double> out(out_space.size(), 0.0);
    const long long n_out = static_cast<long long>(out.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (values_.size() >= kParallelGrain)
#endif
    for (long long o = 0; o < n_out; ++o) {
        std::vector<int> assign(kept.size());
        out_space.assignment_of(static_cast<std::size_t>(o), assign);
        std::size_t base = 0;
        for (std::size_t k = 0; k < kept.size(); ++k) {
            base += static_cast<std::size_t>(assign[k]) * in_strides[kept[k]];
        }
        double s = 0.0;
        for (std::size_t off : offsets) s += values_[base + off];
        out[static_cast<std::size_t>(o)] = s;
    }
    return Factor(std::move(out_scope), std::move(out_cards), std::move(out));
}

Factor Factor::marginalize_serial(const std::vector<int>& keep) const {
    const auto kept = keep_positions(scope_, keep);

    std::vector<int> out_scope, out_cards;
    for (auto p : kept) {
        out_scope.push_back(scope_[p]);
        out_cards.push_back(cards_[p]);
    }
    IndexSpace out_space{out_cards};
    std::vector<double> out(out_space.size(), 0.0);

    // Single pass over the input: map each entry to its output slot.
    std::vector<int> assign(scope_.size());
    std::vector<int> out_assign(kept.size());
    const IndexSpace in_space = index_space();
    for (std::size_t i = 0; i < values_.size(); ++i) {
        in_space.assignment_of(i, assign);
        for (std::size_t k = 0; k < kept.size(); ++k) out_assign[k] = assign[kept[k]];
        out[out_space.index_of(out_assign)] += values_[i];
    }
    return Factor(std::move(out_scope), std::move(out_cards), std::move(out));
}

Factor Factor::multiply(const Factor& other, std::size_t max_entries) const {
    // Union scope, ascending.
    std::vector<int> scope, cards;
    {
        std::size_t a = 0, b = 0;
        while (a < scope_.size() || b < other.scope_.size()) {
            if (b == other.scope_.size() || (a < scope_.size() && scope_[a] < other.scope_[b])) {
                scope.push_back(scope_[a]);
                cards.push_back(cards_[a]);
                ++a;
            } else if (a == scope_.size() || other.scope_[b] < scope_[a]) {
                scope.push_back(other.scope_[b]);
                cards.push_back(other.cards_[b]);
                ++b;
            } else {
                if (cards_[a] != other.cards_[b]) {
                    throw ScopeMismatch("cardinality disagreement on shared variable " +
                                        std::to_string(scope_[a]));
                }
                scope.push_back(scope_[a]);
                cards.push_back(cards_[a]);
                ++a;
                ++b;
            }
        }
    }
    IndexSpace space{cards};
    const std::size_t n = space.size();
    if (n > max_entries) {
        throw StateSpaceTooLarge("factor product would hold " + std::to_string(n) + " entries (limit " +
                                 std::to_string(max_entries) + ")");
    }

    // Per-operand stride of each union variable (0 when absent).
    auto operand_strides = [&scope](const Factor& f) {
        const auto fs = f.index_space().strides();
        std::vector<std::size_t> s(scope.size(), 0);
        std::size_t k = 0;
        for (std::size_t u = 0; u < scope.size(); ++u) {
            if (k < f.scope_.size() && f.scope_[k] == scope[u]) {
                s[u] = fs[k];
                ++k;
            }
        }
        return s;
    };
    const auto sa = operand_strides(*this);
    const auto sb = operand_strides(other);

    std::vector<double> out(n);
    const long long nn = static_cast<long long>(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (n >= kParallelGrain)
#endif
    for (long long i = 0; i < nn; ++i) {
        std::vector<int> assign(scope.size());
        space.assignment_of(static_cast<std::size_t>(i), assign);
        std::size_t ia = 0, ib = 0;
        for (std::size_t u = 0; u < scope.size(); ++u) {
            ia += static_cast<std::size_t>(assign[u]) * sa[u];
            ib += static_cast<std::size_t>(assign[u]) * sb[u];
        }
        out[static_cast<std::size_t>(i)] = values_[ia] * other.values_[ib];
    }
    return Factor(std::move(scope), std::move(cards), std::move(out));
}

Factor Factor::sum_out(int var) const {
    std::vector<int> keep;
    bool found = false;
    for (int v : scope_) {
        if (v == var) {
            found = true;
        } else {
            keep.push_back(v);
        }
    }
    if (!found) {
        throw UnknownVariable("variable " + std::to_string(var) + " not in factor scope");
    }
    return marginalize(keep);
}

void Factor::normalize() {
    const double t = total();
    if (t <= 0.0) {
        throw Error("cannot normalize a factor with nonpositive total mass");
    }
    for (double& v : values_) v /= t;
}

} // namespace bnpool
