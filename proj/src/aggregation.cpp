#include "bnpool/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bnpool/inference.hpp"
#include "bnpool/kernels.hpp"
#include "bnpool/sampling.hpp"

namespace bnpool {

void validate_sources(std::span<const SourceReport> sources) {
    if (sources.empty()) {
        throw WeightError("source pool is empty");
    }
    double sum = 0.0;
    bool all_m = true;
    double total_m = 0.0;
    for (const auto& s : sources) {
        if (!(s.alpha >= 0.0) || s.alpha > 1.0 + 1e-12) {
            throw WeightError("source weight outside [0, 1]");
        }
        sum += s.alpha;
        if (s.m) {
            if (*s.m < 0.0) throw WeightError("negative source sample count");
            total_m += *s.m;
        } else {
            all_m = false;
        }
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw WeightError("source weights sum to " + std::to_string(sum) + ", expected 1");
    }
    if (all_m && total_m > 0.0) {
        for (const auto& s : sources) {
            if (std::abs(s.alpha - *s.m / total_m) > 1e-9) {
                throw WeightError("weights disagree with declared sample counts");
            }
        }
    }
    const auto& vars = sources.front().net.variables;
    for (const auto& s : sources) {
        if (s.net.variables != vars) {
            throw VariableMismatch("source networks disagree on the variable list");
        }
    }
}

Factor linop(std::span<const double> weights, std::span<const Factor> dists) {
    if (weights.size() != dists.size() || weights.empty()) {
        throw WeightError("need one weight per distribution");
    }
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw WeightError("weights must be nonnegative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw WeightError("weights sum to " + std::to_string(sum) + ", expected 1");
    }
    const Factor& first = dists.front();
    std::vector<std::span<const double>> tables;
    tables.reserve(dists.size());
    for (const auto& d : dists) {
        if (d.scope() != first.scope() || d.cards() != first.cards()) {
            throw ScopeMismatch("pooled distributions must share one scope");
        }
        tables.push_back(d.values());
    }
    std::vector<double> out(first.size());
    mix_tables(weights, tables, out);
    return Factor(first.scope(), first.cards(), std::move(out));
}

Factor de_smooth_family(const SourceReport& source, const std::vector<int>& family) {
    if (!source.prior || !source.m) {
        throw MissingPriorInfo("de-smoothing needs the source's prior and sample count");
    }
    const double mi = *source.m;
    const double xi = source.prior->xi();
    Factor p = marginal(source.net, family);
    if (xi == 0.0) {
        return p;
    }
    if (mi <= 0.0) {
        throw DegenerateCounts("cannot de-smooth a source with zero samples");
    }
    const Factor rho = source.prior->rho_over(source.net.variables, p.scope());
    for (std::size_t k = 0; k < p.size(); ++k) {
        const double v = ((mi + xi) * p[k] - rho[k] * xi) / mi;
        p[k] = v > 0.0 ? v : 0.0;
    }
    p.normalize();
    return p;
}

LinopPool::LinopPool(std::vector<SourceReport> sources, bool de_smooth)
    : sources_(std::move(sources)), de_smooth_(de_smooth) {
    validate_sources(sources_);
    if (de_smooth_) {
        for (const auto& s : sources_) {
            if (!s.prior || !s.m) {
                throw MissingPriorInfo("de-smoothing needs every source's prior and sample count");
            }
        }
    }
}

Factor LinopPool::marginal(std::vector<int> targets) const {
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.find(targets);
        if (it != cache_.end()) return it->second;
    }
    std::vector<Factor> parts;
    std::vector<double> weights;
    parts.reserve(sources_.size());
    for (const auto& s : sources_) {
        parts.push_back(de_smooth_ ? de_smooth_family(s, targets) : bnpool::marginal(s.net, targets));
        weights.push_back(s.alpha);
    }
    Factor mixed = linop(weights, parts);
    {
        std::lock_guard<std::mutex> lock(mu_);
        cache_.emplace(std::move(targets), mixed);
    }
    return mixed;
}

void LinopPool::clear_cache() const {
    std::lock_guard<std::mutex> lock(mu_);
    cache_.clear();
}

Factor linop_marginal(const LinopPool& pool, const std::vector<int>& targets) {
    return pool.marginal(targets);
}

Factor map_aggregate_joint(std::span<const SourceReport> sources, const DirichletSpec& dm_prior,
                           double m, std::size_t max_entries) {
    validate_sources(sources);
    for (const auto& s : sources) {
        if (!s.prior || !s.m) {
            throw MissingPriorInfo("MAP aggregation needs every source's prior and sample count");
        }
    }
    if (m <= 0.0) throw Error("pooled sample count must be positive");

    std::vector<Factor> joints;
    std::vector<double> alphas;
    for (const auto& s : sources) {
        joints.push_back(full_joint(s.net, max_entries));
        alphas.push_back(s.alpha);
    }
    Factor pool = linop(alphas, joints);

    const auto& vars = sources.front().net.variables;
    const std::vector<int>& scope = pool.scope();
    const Factor rho = dm_prior.rho_over(vars, scope);
    const double xi = dm_prior.xi();

    Factor out = pool;
    for (std::size_t k = 0; k < out.size(); ++k) {
        double v = (m * pool[k] + rho[k] * xi) / (m + xi);
        for (std::size_t i = 0; i < joints.size(); ++i) {
            const double xi_i = sources[i].prior->xi();
            if (xi_i == 0.0) continue;
            const Factor rho_i = sources[i].prior->rho_over(vars, scope);
            v += xi_i / (m + xi) * (joints[i][k] - rho_i[k]);
        }
        out[k] = v > 0.0 ? v : 0.0;
    }
    return out;
}

Factor LinopStats::family_joint(int child, const std::vector<int>& parents) const {
    std::vector<int> scope = parents;
    scope.push_back(child);
    return pool_->marginal(std::move(scope));
}

namespace {

double resolve_m_estimate(const std::vector<SourceReport>& sources, double configured) {
    if (configured > 0.0) return configured;
    double total = 0.0;
    for (const auto& s : sources) {
        if (!s.m) {
            throw ConfigError("m_estimate not given and source sample counts are incomplete");
        }
        total += *s.m;
    }
    if (total <= 0.0) {
        throw ConfigError("source sample counts sum to zero; give m_estimate explicitly");
    }
    return total;
}

SearchConfig search_config_for(const AggregationConfig& config) {
    SearchConfig sc = config.search;
    sc.parameterization = config.parameterization;
    if (config.parameterization == Parameterization::Map) {
        if (!config.dm_prior) {
            throw ConfigError("MAP parameterization needs the DM prior");
        }
        sc.prior = config.dm_prior;
    }
    return sc;
}

} // namespace

AggrResult aggr(const std::vector<SourceReport>& sources, const AggregationConfig& config,
                const SeededRng& rng) {
    const double m_est = resolve_m_estimate(sources, config.m_estimate);
    LinopPool pool(sources, config.de_smooth);
    LinopStats stats(pool, m_est);
    const SearchResult res = structure_search(stats, m_est, search_config_for(config), rng);
    return {res.net, res.score};
}

std::vector<std::size_t> largest_remainder_quotas(std::span<const double> weights, std::size_t total) {
    std::vector<std::size_t> quota(weights.size(), 0);
    std::vector<std::pair<double, std::size_t>> remainder; // (-fraction, index) for stable ordering
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double exact = weights[i] * static_cast<double>(total);
        quota[i] = static_cast<std::size_t>(std::floor(exact));
        assigned += quota[i];
        remainder.emplace_back(-(exact - std::floor(exact)), i);
    }
    std::sort(remainder.begin(), remainder.end());
    for (std::size_t k = 0; assigned < total && k < remainder.size(); ++k, ++assigned) {
        ++quota[remainder[k].second];
    }
    // degenerate float cases: dump any shortfall on the largest weight
    while (assigned < total) {
        std::size_t arg = 0;
        for (std::size_t i = 1; i < weights.size(); ++i) {
            if (weights[i] > weights[arg]) arg = i;
        }
        ++quota[arg];
        ++assigned;
    }
    return quota;
}

BayesNet samp_baseline(const std::vector<SourceReport>& sources, std::size_t m,
                       const AggregationConfig& config, const SeededRng& rng) {
    validate_sources(sources);
    if (m < sources.size()) {
        throw ConfigError("need at least one sample per source");
    }
    std::vector<double> alphas;
    for (const auto& s : sources) alphas.push_back(s.alpha);
    const auto quotas = largest_remainder_quotas(alphas, m);

    DataSet combined(sources.front().net.variables);
    combined.reserve(m);
    for (std::size_t i = 0; i < sources.size(); ++i) {
        if (quotas[i] == 0) continue;
        const DataSet part = forward_sample(sources[i].net, quotas[i], rng.split(i));
        for (std::size_t r = 0; r < part.size(); ++r) {
            combined.push_row(part.row(r));
        }
    }

    DataSetStats stats(combined);
    const SearchResult res = structure_search(stats, static_cast<double>(m), search_config_for(config),
                                              rng.split(sources.size()));
    return res.net;
}

} // namespace bnpool
