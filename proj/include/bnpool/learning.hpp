#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "bnpool/factor.hpp"
#include "bnpool/network.hpp"
#include "bnpool/rng.hpp"
#include "bnpool/sampling.hpp"
#include "bnpool/types.hpp"

namespace bnpool {

// Dirichlet prior assessed by equivalent samples: a prior distribution rho
// and a pseudo-sample size xi. rho is either explicitly tabulated over the
// full variable set or the symbolic uniform distribution (usable at any
// scale). xi == 0 degenerates to no prior influence, which keeps the
// de-smoothing identity case expressible.
class DirichletSpec {
public:
    static DirichletSpec uniform(double xi);
    static DirichletSpec from_factor(Factor rho, double xi);

    bool is_uniform() const { return uniform_; }
    double xi() const { return xi_; }

    // rho marginalized onto the sorted variable-index subset `scope`.
    Factor rho_over(std::span<const Variable> vars, const std::vector<int>& scope) const;

private:
    DirichletSpec(bool uniform, Factor rho, double xi)
        : uniform_(uniform), rho_(std::move(rho)), xi_(xi) {}

    bool uniform_ = true;
    Factor rho_;
    double xi_ = 0.0;
};

// Abstract provider of family-marginal queries: the joint distribution over
// {child} + parents, plus an effective sample count. Implementations must be
// safe for concurrent read queries.
class StatisticsSource {
public:
    virtual ~StatisticsSource() = default;
    virtual const std::vector<Variable>& variables() const = 0;
    // Distribution over the sorted scope {child} + parents.
    virtual Factor family_joint(int child, const std::vector<int>& parents) const = 0;
    virtual double effective_samples() const = 0;
};

// Statistics backed by a complete dataset: family joints are empirical
// frequencies. Queries are cached; the cache is mutex-guarded and idempotent.
class DataSetStats : public StatisticsSource {
public:
    explicit DataSetStats(const DataSet& ds);

    const std::vector<Variable>& variables() const override { return ds_->variables(); }
    Factor family_joint(int child, const std::vector<int>& parents) const override;
    double effective_samples() const override { return static_cast<double>(ds_->size()); }

private:
    const DataSet* ds_;
    mutable std::mutex mu_;
    mutable std::map<std::vector<int>, Factor> cache_;
};

// Statistics backed by an explicit joint distribution.
class DistributionStats : public StatisticsSource {
public:
    DistributionStats(std::vector<Variable> vars, Factor joint, double m_eff);

    const std::vector<Variable>& variables() const override { return vars_; }
    Factor family_joint(int child, const std::vector<int>& parents) const override;
    double effective_samples() const override { return m_eff_; }

private:
    std::vector<Variable> vars_;
    Factor joint_;
    double m_eff_;
};

// Integer count table over the sorted family scope {child} + parents;
// entries sum to the dataset size.
Factor family_counts(const DataSet& ds, int child, const std::vector<int>& parents);

// Maximum-likelihood parameterization of `dag` from family marginals:
// each CPT row is the family joint divided by the parent marginal;
// zero-mass parent rows become uniform.
BayesNet fit_mle(const Dag& dag, const StatisticsSource& stats);

// Dirichlet-posterior-predictive parameterization:
//   P(x | pa) = (count(x,pa) + rho(x,pa) xi) / (count(pa) + rho(pa) xi).
BayesNet fit_map(const Dag& dag, const DataSet& ds, const DirichletSpec& prior);

// Same, with expected counts m * family_joint from a statistics source.
BayesNet fit_map_stats(const Dag& dag, const StatisticsSource& stats, double m,
                       const DirichletSpec& prior);

// Number of independent parameters of `dag` over the given variables.
double dag_dimension(const Dag& dag, std::span<const Variable> vars);

// Structure description length in bits: sum_i |Pa(X_i)| * log2 N.
double structure_description_length(const Dag& dag);

// MDL score in bits (higher is better):
//   m * sum_i sum_fam p(x_i, pa_i) log2 p(x_i | pa_i)
//   - log2(m)/2 * Dim[dag]  - DL(dag) when structure_dl is on.
double mdl_score(const Dag& dag, const StatisticsSource& stats, double m, bool structure_dl = true);

// All DAGs one edge addition, removal, or reversal away, excluding cyclic
// results and children beyond max_parents. Enumeration order is frozen:
// additions, then removals, then reversals, each sorted by (from, to).
std::vector<Dag> neighbors(const Dag& dag, std::optional<int> max_parents = std::nullopt);

enum class StartMode { Empty, Random };
enum class Parameterization { Mle, Map };

struct SearchConfig {
    int restarts = 1;
    std::optional<int> max_parents;               // unset: unlimited for <= 10 nodes, else 4
    StartMode start_mode = StartMode::Empty;
    bool structure_dl = true;
    Parameterization parameterization = Parameterization::Mle;
    std::optional<DirichletSpec> prior;           // required for Map
};

struct SearchResult {
    BayesNet net;
    Dag dag;
    double score = 0.0;
};

// Greedy hill climbing with random restarts over add/remove/reverse moves.
// Strict improvement only; ties keep the incumbent or the earlier neighbor.
// Deterministic in (stats, m, config, rng); restarts run in parallel on
// pre-split substreams.
SearchResult structure_search(const StatisticsSource& stats, double m, const SearchConfig& config,
                              const SeededRng& rng);

// Resolved max-parents cap for an n-node problem.
int resolve_max_parents(std::optional<int> configured, int node_count);

// Random DAG used by StartMode::Random: a random topological order with each
// forward edge included independently (density 0.25), respecting the cap.
Dag random_dag(int node_count, int max_parents, SeededRng& rng);

} // namespace bnpool
