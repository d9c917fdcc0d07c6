#include "causal/datagen.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include "causal/errors.hpp"
#include "causal/rng.hpp"

namespace causal {

LearnerKind learner_kind_from_name(const std::string& name) {
    if (name == "pc")
        return LearnerKind::pc;
    if (name == "ges")
        return LearnerKind::ges;
    if (name == "mmhc")
        return LearnerKind::mmhc;
    throw ConfigError("unknown learner '" + name + "' (expected pc, ges, or mmhc)");
}

const char* learner_name(LearnerKind kind) {
    switch (kind) {
        case LearnerKind::pc:
            return "pc";
        case LearnerKind::ges:
            return "ges";
        default:
            return "mmhc";
    }
}

Pdag run_learner(LearnerKind kind, const Dataset& data, const LearnerConfig& config) {
    switch (kind) {
        case LearnerKind::pc:
            return pc(data, config);
        case LearnerKind::ges:
            return ges(data, config);
        default:
            return Pdag::from_dag(mmhc(data, config));
    }
}

std::vector<std::pair<DiscreteBayesNet, Dataset>> synthetic_benchmark(
    int n_dags, int n_vars, double expected_neighbors, int n_samples,
    double alpha_dirichlet, std::uint64_t seed) {
    if (n_dags < 0)
        throw ParameterError("synthetic_benchmark: n_dags must be nonnegative");
    std::vector<std::pair<DiscreteBayesNet, Dataset>> out;
    out.reserve(static_cast<std::size_t>(n_dags));
    for (int i = 0; i < n_dags; ++i) {
        const std::uint64_t u = static_cast<std::uint64_t>(i);
        const Dag g = random_dag(n_vars, expected_neighbors, derive_seed(seed, {1, u}));
        DiscreteBayesNet net =
            dirichlet_parameterize(g, 2, alpha_dirichlet, derive_seed(seed, {2, u}));
        Dataset data = forward_sample(net, n_samples, derive_seed(seed, {3, u}));
        out.emplace_back(std::move(net), std::move(data));
    }
    return out;
}

std::pair<DiscreteBayesNet, Dataset> synthetic_from_empirical(const Dataset& data,
                                                              LearnerKind learner,
                                                              const LearnerConfig& config,
                                                              int n_samples,
                                                              std::uint64_t seed) {
    const Pdag learned = run_learner(learner, data, config);
    const Dag extension = extend_or_force(learned);
    DiscreteBayesNet net = fit_parameters(extension, data, 1.0);
    Dataset synthetic = forward_sample(net, n_samples, derive_seed(seed, {4, 0}));
    return {std::move(net), std::move(synthetic)};
}

DiscreteBayesNet alter_model(const DiscreteBayesNet& net, const std::string& treatment,
                             const std::vector<std::string>& outcomes, AlterMode mode,
                             const Dataset& data, double smoothing) {
    const Dag& g = net.dag();
    const int t = g.index_of(treatment);

    Dag altered(g.variables());
    std::set<int> refit;
    if (mode == AlterMode::underspecify) {
        for (const auto& [a, b] : g.edges())
            if (a != t)
                altered.add_edge(a, b);
            else
                refit.insert(b);
    } else {
        for (const auto& [a, b] : g.edges())
            altered.add_edge(a, b);
        for (const std::string& name : outcomes) {
            const int o = g.index_of(name);
            if (altered.has_edge(t, o))
                continue;
            try {
                altered.add_edge(t, o);
            } catch (const ParameterError&) {
                throw AlterationError("overspecify would create a cycle: " +
                                      treatment + " -> " + name);
            }
            refit.insert(o);
        }
    }

    // Refit only the nodes whose parent sets changed; everything else keeps
    // its parameters.
    DiscreteBayesNet out(altered, [&] {
        std::vector<std::vector<std::string>> labels;
        for (int v = 0; v < g.num_variables(); ++v)
            labels.push_back(net.labels(v));
        return labels;
    }());
    const DiscreteBayesNet refitted = fit_parameters(altered, data, smoothing);
    for (int v = 0; v < g.num_variables(); ++v) {
        if (refit.count(v))
            out.set_cpt(v, refitted.cpt(v));
        else
            out.set_cpt(v, net.cpt(v));
    }
    return out;
}

FactorialFixture synthesize_factorial_fixture(const FixtureParams& params,
                                              std::uint64_t seed) {
    if (params.subjects < 2 || params.treatments < 1 || params.outcomes < 1 ||
        params.trials < 1 || params.covariate_levels < 1)
        throw ParameterError("synthesize_factorial_fixture: counts must be positive");
    if (!(params.multiplier > 0.0) || params.subject_sigma < 0.0 || params.noise_sigma < 0.0)
        throw ParameterError("synthesize_factorial_fixture: scales must be positive");

    const int m = params.treatments, q = params.outcomes;
    std::vector<std::string> treat_names, out_names;
    for (int j = 0; j < m; ++j)
        treat_names.push_back("T" + std::to_string(j + 1));
    for (int o = 0; o < q; ++o)
        out_names.push_back("O" + std::to_string(o + 1));

    // The trailing quarter of the outcomes are null; each remaining outcome
    // responds to exactly one treatment, round-robin.
    const int null_count = q / 4;
    std::vector<int> driver(q, -1);
    FactorialFixture fixture{FactorialDataset{}, {}};
    for (int o = 0; o < q - null_count; ++o) {
        driver[o] = o % m;
        fixture.true_effects.emplace_back(treat_names[driver[o]], out_names[o]);
    }

    Rng rng(derive_seed(seed, {7}));
    std::vector<double> subject_factor(params.subjects);
    for (double& f : subject_factor)
        f = std::exp(params.subject_sigma * rng.normal());

    std::vector<FactorialRecord> records;
    records.reserve(static_cast<std::size_t>(params.subjects) * (1 << m) * params.trials);
    char buf[64];
    for (int s = 0; s < params.subjects; ++s) {
        const std::string cov = std::to_string(s % params.covariate_levels + 1);
        for (int mask = 0; mask < (1 << m); ++mask) {
            for (int trial = 0; trial < params.trials; ++trial) {
                FactorialRecord rec;
                rec.subject = "s" + std::to_string(s + 1);
                rec.trial = trial;
                rec.covariates = {cov};
                for (int j = 0; j < m; ++j)
                    rec.treatments.push_back((mask >> j) & 1);
                for (int o = 0; o < q; ++o) {
                    double value = 10.0 * (o + 1) * subject_factor[s] *
                                   std::exp(params.noise_sigma * rng.normal());
                    if (driver[o] >= 0 && ((mask >> driver[o]) & 1))
                        value *= params.multiplier;
                    std::snprintf(buf, sizeof buf, "%.8g", value);
                    rec.outcomes.emplace_back(buf);
                }
                records.push_back(std::move(rec));
            }
        }
    }
    fixture.data = FactorialDataset::create({"C"}, treat_names, out_names, records);
    return fixture;
}

}  // namespace causal
