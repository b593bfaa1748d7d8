#include "bnpool/learning.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "bnpool/inference.hpp"

namespace bnpool {

DirichletSpec DirichletSpec::uniform(double xi) {
    if (xi < 0.0) throw Error("equivalent sample size must be >= 0");
    return DirichletSpec(true, Factor(), xi);
}

DirichletSpec DirichletSpec::from_factor(Factor rho, double xi) {
    if (xi < 0.0) throw Error("equivalent sample size must be >= 0");
    if (!rho.is_distribution()) {
        throw Error("prior rho must be a distribution");
    }
    return DirichletSpec(false, std::move(rho), xi);
}

Factor DirichletSpec::rho_over(std::span<const Variable> vars, const std::vector<int>& scope) const {
    std::vector<int> sorted = scope;
    std::sort(sorted.begin(), sorted.end());
    if (uniform_) {
        std::vector<int> cards;
        std::size_t n = 1;
        for (int v : sorted) {
            if (v < 0 || v >= static_cast<int>(vars.size())) {
                throw UnknownVariable("prior scope index " + std::to_string(v) + " out of range");
            }
            cards.push_back(vars[static_cast<std::size_t>(v)].cardinality());
            n *= static_cast<std::size_t>(cards.back());
        }
        return Factor(std::move(sorted), std::move(cards),
                      std::vector<double>(n, 1.0 / static_cast<double>(n)));
    }
    return rho_.marginalize(sorted);
}

DataSetStats::DataSetStats(const DataSet& ds) : ds_(&ds) {
    if (ds.size() == 0) {
        throw EmptyDataSet("statistics need at least one row");
    }
}

Factor DataSetStats::family_joint(int child, const std::vector<int>& parents) const {
    std::vector<int> scope = parents;
    scope.push_back(child);
    std::sort(scope.begin(), scope.end());
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.find(scope);
        if (it != cache_.end()) return it->second;
    }
    Factor f = family_counts(*ds_, child, parents);
    const double m = static_cast<double>(ds_->size());
    for (auto& v : f.mutable_values()) v /= m;
    {
        std::lock_guard<std::mutex> lock(mu_);
        cache_.emplace(scope, f);
    }
    return f;
}

DistributionStats::DistributionStats(std::vector<Variable> vars, Factor joint, double m_eff)
    : vars_(std::move(vars)), joint_(std::move(joint)), m_eff_(m_eff) {
    if (joint_.scope().size() != vars_.size()) {
        throw ScopeMismatch("distribution must cover every variable");
    }
}

Factor DistributionStats::family_joint(int child, const std::vector<int>& parents) const {
    std::vector<int> scope = parents;
    scope.push_back(child);
    return joint_.marginalize(scope);
}

Factor family_counts(const DataSet& ds, int child, const std::vector<int>& parents) {
    const int n = static_cast<int>(ds.var_count());
    auto check = [n](int v) {
        if (v < 0 || v >= n) {
            throw UnknownVariable("variable index " + std::to_string(v) + " out of range");
        }
    };
    check(child);
    for (int p : parents) {
        check(p);
        if (p == child) throw Error("child repeated in its own parent set");
    }

    std::vector<int> scope = parents;
    scope.push_back(child);
    std::sort(scope.begin(), scope.end());
    scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
    if (scope.size() != parents.size() + 1) {
        throw Error("duplicate parent in family");
    }

    std::vector<int> cards;
    for (int v : scope) cards.push_back(ds.variables()[static_cast<std::size_t>(v)].cardinality());
    IndexSpace space{cards};
    std::vector<double> counts(space.size(), 0.0);
    std::vector<int> assign(scope.size());
    for (std::size_t r = 0; r < ds.size(); ++r) {
        for (std::size_t k = 0; k < scope.size(); ++k) assign[k] = ds.at(r, scope[k]);
        counts[space.index_of(assign)] += 1.0;
    }
    return Factor(std::move(scope), std::move(cards), std::move(counts));
}

namespace {

BayesNet shell_for(const Dag& dag, const std::vector<Variable>& vars) {
    BayesNet net;
    net.variables = vars;
    net.dag = dag;
    net.cpts.resize(vars.size());
    return net;
}

} // namespace

BayesNet fit_mle(const Dag& dag, const StatisticsSource& stats) {
    const auto& vars = stats.variables();
    BayesNet net = shell_for(dag, vars);
    for (int i = 0; i < net.node_count(); ++i) {
        const auto& parents = dag.parents(i);
        const Factor fam = stats.family_joint(i, parents);
        net.cpts[static_cast<std::size_t>(i)] = conditional_from_marginals(fam, i, parents);
    }
    return net;
}

namespace {

// Shared core of the two MAP fits: expected counts + family-restricted prior.
BayesNet fit_map_counts(const Dag& dag, const std::vector<Variable>& vars,
                        const std::function<Factor(int, const std::vector<int>&)>& counts_for,
                        const DirichletSpec& prior) {
    BayesNet net = shell_for(dag, vars);
    for (int i = 0; i < net.node_count(); ++i) {
        const auto& parents = dag.parents(i);
        std::vector<int> scope = parents;
        scope.push_back(i);
        std::sort(scope.begin(), scope.end());

        const Factor counts = counts_for(i, parents);
        const Factor rho = prior.rho_over(vars, scope);
        Factor posterior = counts;
        for (std::size_t k = 0; k < posterior.size(); ++k) {
            posterior[k] = counts[k] + rho[k] * prior.xi();
        }
        net.cpts[static_cast<std::size_t>(i)] = conditional_from_marginals(
            [&] {
                // normalize so conditional_from_marginals sees a distribution
                Factor p = posterior;
                p.normalize();
                return p;
            }(),
            i, parents);
    }
    return net;
}

} // namespace

BayesNet fit_map(const Dag& dag, const DataSet& ds, const DirichletSpec& prior) {
    if (prior.xi() == 0.0 && ds.size() == 0) {
        throw EmptyDataSet("MAP with xi = 0 needs data");
    }
    return fit_map_counts(
        dag, ds.variables(),
        [&ds](int child, const std::vector<int>& parents) {
            if (ds.size() == 0) {
                // prior only: zero counts over the family
                std::vector<int> scope = parents;
                scope.push_back(child);
                std::sort(scope.begin(), scope.end());
                std::vector<int> cards;
                std::size_t n = 1;
                for (int v : scope) {
                    cards.push_back(ds.variables()[static_cast<std::size_t>(v)].cardinality());
                    n *= static_cast<std::size_t>(cards.back());
                }
                return Factor(std::move(scope), std::move(cards), std::vector<double>(n, 0.0));
            }
            return family_counts(ds, child, parents);
        },
        prior);
}

BayesNet fit_map_stats(const Dag& dag, const StatisticsSource& stats, double m,
                       const DirichletSpec& prior) {
    if (m <= 0.0) throw Error("effective sample count must be positive");
    return fit_map_counts(
        dag, stats.variables(),
        [&stats, m](int child, const std::vector<int>& parents) {
            Factor f = stats.family_joint(child, parents);
            for (auto& v : f.mutable_values()) v *= m;
            return f;
        },
        prior);
}

double dag_dimension(const Dag& dag, std::span<const Variable> vars) {
    double dim = 0.0;
    for (int i = 0; i < dag.node_count(); ++i) {
        double rows = 1.0;
        for (int p : dag.parents(i)) {
            rows *= static_cast<double>(vars[static_cast<std::size_t>(p)].cardinality());
        }
        dim += rows * static_cast<double>(vars[static_cast<std::size_t>(i)].cardinality() - 1);
    }
    return dim;
}

double structure_description_length(const Dag& dag) {
    const double n = static_cast<double>(dag.node_count());
    double bits = 0.0;
    for (int i = 0; i < dag.node_count(); ++i) {
        bits += static_cast<double>(dag.parents(i).size()) * std::log2(n);
    }
    return bits;
}

namespace {

// Likelihood component of one family plus its parameter penalty:
//   m * sum p(x,pa) log2 p(x|pa)  -  log2(m)/2 * (|dom child|-1) prod |dom pa|
double family_component(const StatisticsSource& stats, double m, int child,
                        const std::vector<int>& parents) {
    const Factor fam = stats.family_joint(child, parents);
    const auto& vars = stats.variables();

    // parent marginal by summing out the child
    std::vector<int> parent_scope = parents;
    std::sort(parent_scope.begin(), parent_scope.end());
    const Factor pa = fam.marginalize(parent_scope);

    const IndexSpace space = fam.index_space();
    const IndexSpace pa_space = pa.index_space();
    std::vector<std::size_t> parent_pos;
    for (int p : parent_scope) {
        auto it = std::lower_bound(fam.scope().begin(), fam.scope().end(), p);
        parent_pos.push_back(static_cast<std::size_t>(it - fam.scope().begin()));
    }

    double ll = 0.0;
    std::vector<int> assign(fam.scope().size());
    std::vector<int> pa_assign(parent_scope.size());
    for (std::size_t i = 0; i < fam.size(); ++i) {
        const double joint = fam[i];
        if (joint <= 0.0) continue; // 0 log 0 := 0
        space.assignment_of(i, assign);
        for (std::size_t k = 0; k < parent_pos.size(); ++k) pa_assign[k] = assign[parent_pos[k]];
        const double mass = pa[pa_space.index_of(pa_assign)];
        ll += joint * std::log2(joint / mass);
    }

    double rows = 1.0;
    for (int p : parents) rows *= static_cast<double>(vars[static_cast<std::size_t>(p)].cardinality());
    const double dim = rows * static_cast<double>(vars[static_cast<std::size_t>(child)].cardinality() - 1);

    return m * ll - 0.5 * std::log2(m) * dim;
}

} // namespace

double mdl_score(const Dag& dag, const StatisticsSource& stats, double m, bool structure_dl) {
    if (m <= 0.0) throw Error("MDL score needs a positive sample count");
    double score = 0.0;
    for (int i = 0; i < dag.node_count(); ++i) {
        score += family_component(stats, m, i, dag.parents(i));
    }
    if (structure_dl) {
        score -= structure_description_length(dag);
    }
    return score;
}

namespace {

enum class MoveKind { Add, Remove, Reverse };

struct Move {
    MoveKind kind;
    int from;
    int to;
};

std::vector<Move> neighbor_moves(const Dag& dag, int max_parents) {
    const int n = dag.node_count();
    std::vector<Move> moves;
    for (int u = 0; u < n; ++u) {
        for (int v = 0; v < n; ++v) {
            if (u == v || dag.has_edge(u, v)) continue;
            if (static_cast<int>(dag.parents(v).size()) >= max_parents) continue;
            if (dag.path_exists(v, u)) continue; // would close a cycle
            moves.push_back({MoveKind::Add, u, v});
        }
    }
    for (const auto& [u, v] : dag.edges()) {
        moves.push_back({MoveKind::Remove, u, v});
    }
    for (const auto& [u, v] : dag.edges()) {
        if (static_cast<int>(dag.parents(u).size()) >= max_parents) continue;
        // u -> v becomes v -> u; any other directed path u ~> v closes a cycle
        Dag probe = dag.without_edge(u, v);
        if (probe.path_exists(u, v)) continue;
        moves.push_back({MoveKind::Reverse, u, v});
    }
    return moves;
}

Dag apply_move(const Dag& dag, const Move& m) {
    switch (m.kind) {
    case MoveKind::Add:
        return dag.with_edge(m.from, m.to);
    case MoveKind::Remove:
        return dag.without_edge(m.from, m.to);
    case MoveKind::Reverse:
        return dag.with_reversed(m.from, m.to);
    }
    return dag;
}

// Strictness threshold for accepting a move; keeps score-equivalent
// neighbors from ping-ponging on float noise.
constexpr double kScoreEps = 1e-9;

struct ClimbResult {
    Dag dag{0};
    double score = 0.0;
};

class FamilyScoreCache {
public:
    FamilyScoreCache(const StatisticsSource& stats, double m) : stats_(stats), m_(m) {}

    double component(int child, const std::vector<int>& parents) {
        Key key{child, parents};
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        const double c = family_component(stats_, m_, child, parents);
        cache_.emplace(std::move(key), c);
        return c;
    }

private:
    using Key = std::pair<int, std::vector<int>>;
    const StatisticsSource& stats_;
    double m_;
    std::map<Key, double> cache_;
};

ClimbResult hill_climb(const StatisticsSource& stats, double m, const Dag& start, int max_parents,
                       bool structure_dl, FamilyScoreCache& cache) {
    const int n = start.node_count();
    const double log_n = std::log2(static_cast<double>(n));

    Dag dag = start;
    std::vector<double> comp(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) comp[static_cast<std::size_t>(i)] = cache.component(i, dag.parents(i));
    auto dl_of = [&](const Dag& d) { return structure_dl ? structure_description_length(d) : 0.0; };
    double score = 0.0;
    for (double c : comp) score += c;
    score -= dl_of(dag);

    for (;;) {
        double best_delta = kScoreEps;
        std::optional<Move> best_move;
        double best_to_comp = 0.0, best_from_comp = 0.0;

        for (const Move& mv : neighbor_moves(dag, max_parents)) {
            Dag cand = apply_move(dag, mv);
            double delta = 0.0;
            double to_comp = 0.0, from_comp = 0.0;
            // only the touched children change their component
            to_comp = cache.component(mv.to, cand.parents(mv.to));
            delta += to_comp - comp[static_cast<std::size_t>(mv.to)];
            if (mv.kind == MoveKind::Reverse) {
                from_comp = cache.component(mv.from, cand.parents(mv.from));
                delta += from_comp - comp[static_cast<std::size_t>(mv.from)];
            }
            if (structure_dl) {
                const int edge_change = mv.kind == MoveKind::Add ? 1 : (mv.kind == MoveKind::Remove ? -1 : 0);
                delta -= static_cast<double>(edge_change) * log_n;
            }
            if (delta > best_delta) {
                best_delta = delta;
                best_move = mv;
                best_to_comp = to_comp;
                best_from_comp = from_comp;
            }
        }
        if (!best_move) break;
        dag = apply_move(dag, *best_move);
        comp[static_cast<std::size_t>(best_move->to)] = best_to_comp;
        if (best_move->kind == MoveKind::Reverse) {
            comp[static_cast<std::size_t>(best_move->from)] = best_from_comp;
        }
        score += best_delta;
    }
    // recompute cleanly to avoid drift from incremental updates
    double fresh = 0.0;
    for (int i = 0; i < n; ++i) fresh += cache.component(i, dag.parents(i));
    fresh -= dl_of(dag);
    return {dag, fresh};
}

} // namespace

int resolve_max_parents(std::optional<int> configured, int node_count) {
    if (configured) {
        if (*configured < 0) throw ConfigError("max_parents must be >= 0");
        return *configured;
    }
    return node_count <= 10 ? node_count - 1 : 4;
}

Dag random_dag(int node_count, int max_parents, SeededRng& rng) {
    const std::vector<int> order = rng.permutation(node_count);
    Dag dag(node_count);
    for (int i = 0; i < node_count; ++i) {
        for (int j = i + 1; j < node_count; ++j) {
            const int from = order[static_cast<std::size_t>(i)];
            const int to = order[static_cast<std::size_t>(j)];
            const double u = rng.next_unit();
            if (u < 0.25 && static_cast<int>(dag.parents(to).size()) < max_parents) {
                dag.add_edge(from, to);
            }
        }
    }
    return dag;
}

std::vector<Dag> neighbors(const Dag& dag, std::optional<int> max_parents) {
    const int cap = resolve_max_parents(max_parents, dag.node_count());
    std::vector<Dag> out;
    for (const Move& mv : neighbor_moves(dag, cap)) {
        out.push_back(apply_move(dag, mv));
    }
    return out;
}

SearchResult structure_search(const StatisticsSource& stats, double m, const SearchConfig& config,
                              const SeededRng& rng) {
    if (config.restarts < 1) throw ConfigError("restarts must be >= 1");
    if (m <= 0.0) throw ConfigError("sample count for scoring must be positive");
    if (config.parameterization == Parameterization::Map && !config.prior) {
        throw ConfigError("MAP parameterization needs a prior");
    }
    const int n = static_cast<int>(stats.variables().size());
    const int cap = resolve_max_parents(config.max_parents, n);

    std::vector<ClimbResult> results(static_cast<std::size_t>(config.restarts));
    std::vector<std::string> failures(static_cast<std::size_t>(config.restarts));
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (config.restarts > 1)
#endif
    for (int r = 0; r < config.restarts; ++r) {
        try {
            SeededRng restart_rng = rng.split(static_cast<std::uint64_t>(r));
            Dag start = config.start_mode == StartMode::Empty ? Dag(n) : random_dag(n, cap, restart_rng);
            FamilyScoreCache cache(stats, m);
            results[static_cast<std::size_t>(r)] = hill_climb(stats, m, start, cap, config.structure_dl, cache);
        } catch (const std::exception& e) {
            failures[static_cast<std::size_t>(r)] = e.what();
        }
    }
    for (const auto& f : failures) {
        if (!f.empty()) throw Error(f);
    }

    std::size_t best = 0;
    for (std::size_t r = 1; r < results.size(); ++r) {
        if (results[r].score > results[best].score) best = r;
    }

    SearchResult out;
    out.dag = results[best].dag;
    out.score = results[best].score;
    out.net = config.parameterization == Parameterization::Mle
                  ? fit_mle(out.dag, stats)
                  : fit_map_stats(out.dag, stats, m, *config.prior);
    return out;
}

} // namespace bnpool
