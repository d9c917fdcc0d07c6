#include "causal/groundtruth.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "causal/csv.hpp"
#include "causal/errors.hpp"
#include "causal/stats.hpp"

namespace causal {

namespace {

int position_of(const std::vector<std::string>& names, const std::string& name,
                const char* what) {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end())
        throw IdentifierError(std::string("unknown ") + what + " '" + name + "'");
    return static_cast<int>(it - names.begin());
}

// Outcome categories as comparable numbers: parsed directly when the whole
// domain is numeric, otherwise by position in the sorted label domain.
std::vector<double> outcome_scale(const FactorialDataset& data, int outcome) {
    const auto& domain = data.outcome_domain(outcome);
    std::vector<double> scale(domain.size());
    bool numeric = true;
    for (std::size_t i = 0; i < domain.size() && numeric; ++i) {
        const char* b = domain[i].data();
        const char* e = b + domain[i].size();
        auto [p, ec] = std::from_chars(b, e, scale[i]);
        numeric = ec == std::errc() && p == e;
    }
    if (!numeric)
        for (std::size_t i = 0; i < domain.size(); ++i)
            scale[i] = static_cast<double>(i);
    return scale;
}

}  // namespace

std::pair<double, double> friedman_test(const FactorialDataset& data,
                                        const std::string& treatment,
                                        const std::string& outcome) {
    const int p = position_of(data.treatment_names(), treatment, "treatment");
    const int o = position_of(data.outcome_names(), outcome, "outcome");
    const int n = data.num_subjects();
    if (n < 2)
        throw ParameterError("friedman_test needs at least 2 subjects as blocks");
    const int k = 2;  // binary treatment arms

    const std::vector<double> scale = outcome_scale(data, o);
    const auto& domain = data.outcome_domain(o);
    auto value_of = [&](const std::string& label) {
        const auto it = std::lower_bound(domain.begin(), domain.end(), label);
        return scale[static_cast<std::size_t>(it - domain.begin())];
    };

    // Arm means per block, averaging over trials and other treatments.
    std::vector<std::array<double, 2>> block_means(n, {0.0, 0.0});
    const int per_arm = data.num_assignments() / 2 * data.num_trials();
    for (int s = 0; s < n; ++s) {
        std::array<double, 2> total{0.0, 0.0};
        for (int mask = 0; mask < data.num_assignments(); ++mask) {
            const int arm = FactorialDataset::treatment_bit(mask, p);
            for (int t = 0; t < data.num_trials(); ++t)
                total[arm] += value_of(data.outcomes_at(s, mask, t)[o]);
        }
        block_means[s] = {total[0] / per_arm, total[1] / per_arm};
    }

    // Mid-rank within each block; accumulate rank sums and the tie term.
    std::array<double, 2> rank_sum{0.0, 0.0};
    double tie_term = 0.0;
    for (int s = 0; s < n; ++s) {
        const std::vector<double> ranks =
            mid_ranks({block_means[s][0], block_means[s][1]});
        rank_sum[0] += ranks[0];
        rank_sum[1] += ranks[1];
        if (block_means[s][0] == block_means[s][1])
            tie_term += 8.0 - 2.0;  // t^3 - t for one group of t = 2
    }

    const double nk = static_cast<double>(n) * k;
    double q = 12.0 / (nk * (k + 1)) *
                   (rank_sum[0] * rank_sum[0] + rank_sum[1] * rank_sum[1]) -
               3.0 * n * (k + 1);
    const double correction = 1.0 - tie_term / (nk * (k * k - 1));
    if (correction <= 0.0)
        return {0.0, 1.0};
    q = std::max(0.0, q / correction);
    return {q, chi_squared_survival(q, k - 1)};
}

std::pair<Dag, EffectLedger> consistent_dag(const FactorialDataset& data,
                                            const std::string& biasing_covariate,
                                            double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ParameterError("consistent_dag: alpha must lie in (0, 1)");
    position_of(data.covariate_names(), biasing_covariate, "covariate");

    std::vector<std::string> variables{biasing_covariate};
    variables.insert(variables.end(), data.treatment_names().begin(),
                     data.treatment_names().end());
    variables.insert(variables.end(), data.outcome_names().begin(),
                     data.outcome_names().end());
    Dag g(variables);
    for (const std::string& t : data.treatment_names())
        g.add_edge(biasing_covariate, t);

    EffectLedger ledger;
    for (const std::string& t : data.treatment_names()) {
        for (const std::string& o : data.outcome_names()) {
            const auto [stat, p_value] = friedman_test(data, t, o);
            const bool related = p_value < alpha;
            ledger.entries.push_back({t, o, stat, p_value, related});
            if (related)
                g.add_edge(t, o);
        }
    }
    return {std::move(g), std::move(ledger)};
}

CategoricalDistribution empirical_do_distribution(const FactorialDataset& data,
                                                  const std::string& outcome,
                                                  const std::string& treatment, int t) {
    const int p = position_of(data.treatment_names(), treatment, "treatment");
    const int o = position_of(data.outcome_names(), outcome, "outcome");
    if (t != 0 && t != 1)
        throw ParameterError("empirical_do_distribution: treatment value must be 0 or 1");

    const auto& domain = data.outcome_domain(o);
    std::vector<double> counts(domain.size(), 0.0);
    double total = 0.0;
    for (int s = 0; s < data.num_subjects(); ++s)
        for (int mask = 0; mask < data.num_assignments(); ++mask) {
            if (FactorialDataset::treatment_bit(mask, p) != t)
                continue;
            for (int trial = 0; trial < data.num_trials(); ++trial) {
                const std::string& label = data.outcomes_at(s, mask, trial)[o];
                const auto it = std::lower_bound(domain.begin(), domain.end(), label);
                counts[static_cast<std::size_t>(it - domain.begin())] += 1.0;
                total += 1.0;
            }
        }
    if (total <= 0.0)
        throw ParameterError("empirical_do_distribution: no records at the requested arm");
    for (double& c : counts)
        c /= total;
    return CategoricalDistribution::make(domain, std::move(counts));
}

void EffectLedger::write_csv(std::ostream& out) const {
    write_csv_row(out, {"treatment", "outcome", "statistic", "p_value", "causally_related"});
    for (const Entry& e : entries) {
        char stat[64], pv[64];
        std::snprintf(stat, sizeof stat, "%.10g", e.statistic);
        std::snprintf(pv, sizeof pv, "%.10g", e.p_value);
        write_csv_row(out, {e.treatment, e.outcome, stat, pv,
                            e.causally_related ? "true" : "false"});
    }
}

}  // namespace causal
