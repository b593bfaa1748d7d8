#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "bnpool/factor.hpp"
#include "bnpool/learning.hpp"
#include "bnpool/network.hpp"
#include "bnpool/rng.hpp"

namespace bnpool {

// One expert's deliverable: a learned network, its pool weight, and
// (optionally) the prior and sample count it learned with.
struct SourceReport {
    BayesNet net;
    double alpha = 0.0;                  // M_i / M
    std::optional<DirichletSpec> prior;  // <rho_i, xi_i>
    std::optional<double> m;             // M_i
};

// Weighted sum of distributions over the identical scope.
Factor linop(std::span<const double> weights, std::span<const Factor> dists);

// Inverts the source's posterior-predictive smoothing on one family marginal:
//   p_hat(v) ~ ((M_i + xi_i) p_i(v) - rho_i(v) xi_i) / M_i,
// clamped at zero and renormalized. Estimates the source's empirical family
// marginal. xi_i == 0 is the identity.
Factor de_smooth_family(const SourceReport& source, const std::vector<int>& family);

// A pool of source reports with a memo from target-variable sets to mixed
// marginals. Lookups are safe under concurrent search restarts; inserts are
// idempotent, so last-writer-wins is acceptable.
class LinopPool {
public:
    LinopPool(std::vector<SourceReport> sources, bool de_smooth);

    const std::vector<SourceReport>& sources() const { return sources_; }
    const std::vector<Variable>& variables() const { return sources_.front().net.variables; }
    bool de_smooth() const { return de_smooth_; }

    // sum_i alpha_i * marginal(net_i, targets), each source computed locally;
    // prior-corrected per source when de_smooth is on. Cached by target set.
    Factor marginal(std::vector<int> targets) const;

    void clear_cache() const;

private:
    std::vector<SourceReport> sources_;
    bool de_smooth_;
    mutable std::mutex mu_;
    mutable std::map<std::vector<int>, Factor> cache_;
};

Factor linop_marginal(const LinopPool& pool, const std::vector<int>& targets);

// Prior-corrected MAP aggregation over full joints (all priors and sample
// counts required):
//   p*(w) = (M LinOP(alpha, p)(w) + rho(w) xi) / (M + xi)
//         + sum_i xi_i / (M + xi) * (p_i(w) - rho_i(w)).
Factor map_aggregate_joint(std::span<const SourceReport> sources, const DirichletSpec& dm_prior,
                           double m, std::size_t max_entries = kStateSpaceLimit);

// StatisticsSource view of a pool: family queries answered by mixed
// (optionally de-smoothed) source marginals.
class LinopStats : public StatisticsSource {
public:
    LinopStats(const LinopPool& pool, double m_estimate) : pool_(&pool), m_(m_estimate) {}

    const std::vector<Variable>& variables() const override { return pool_->variables(); }
    Factor family_joint(int child, const std::vector<int>& parents) const override;
    double effective_samples() const override { return m_; }

private:
    const LinopPool* pool_;
    double m_;
};

struct AggregationConfig {
    double m_estimate = 0.0;             // 0: use sum of source sample counts
    std::optional<DirichletSpec> dm_prior;
    SearchConfig search;
    Parameterization parameterization = Parameterization::Mle;
    bool de_smooth = false;
};

struct AggrResult {
    BayesNet net;
    double score = 0.0;
};

// Structure search driven by LinOP family marginals of the source networks,
// scored with the DM's estimate of M; final CPTs come from the same family
// joints (MAP-smoothed with the DM prior when configured).
AggrResult aggr(const std::vector<SourceReport>& sources, const AggregationConfig& config,
                const SeededRng& rng);

// Baseline: draw round(alpha_i * m) samples from each source network
// (largest-remainder rounding so quotas sum to m), concatenate, and run the
// standard data-driven learner on the synthetic set.
BayesNet samp_baseline(const std::vector<SourceReport>& sources, std::size_t m,
                       const AggregationConfig& config, const SeededRng& rng);

// Largest-remainder quotas: round(weights * total) summing exactly to total.
std::vector<std::size_t> largest_remainder_quotas(std::span<const double> weights, std::size_t total);

// Validates weights and variable agreement across a pool of reports.
void validate_sources(std::span<const SourceReport> sources);

} // namespace bnpool
