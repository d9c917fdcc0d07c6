#include "causal/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "causal/csv.hpp"
#include "causal/errors.hpp"
#include "causal/groundtruth.hpp"
#include "causal/obsbias.hpp"
#include "causal/rng.hpp"
#include "causal/stats.hpp"

namespace causal {

namespace {

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

std::string format_value(double x) {
    if (std::isnan(x))
        return "NA";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", x);
    return buf;
}

// TVD over the union of the two domains, absent categories at probability 0.
double aligned_tvd(const CategoricalDistribution& p, const CategoricalDistribution& q) {
    if (p.domain == q.domain)
        return tvd(p, q);
    std::map<std::string, std::pair<double, double>> merged;
    for (std::size_t i = 0; i < p.domain.size(); ++i)
        merged[p.domain[i]].first = p.probabilities[i];
    for (std::size_t i = 0; i < q.domain.size(); ++i)
        merged[q.domain[i]].second = q.probabilities[i];
    double total = 0.0;
    for (const auto& [label, pq] : merged)
        total += std::abs(pq.first - pq.second);
    return 0.5 * total;
}

struct CellResult {
    MetricRow row;
    std::vector<EffectEntry> effects;
};

// Runs fn(0..n-1) across `workers` threads. Work is handed out through an
// atomic counter and every cell writes only its own slot, so the assembled
// result is independent of the worker count and of scheduling.
template <typename Fn>
void parallel_for(int n, int workers, Fn&& fn) {
    const int k = std::min(workers, n);
    if (k <= 1) {
        for (int i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<int> next{0};
    auto drain = [&] {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1))
            fn(i);
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < k; ++t)
        pool.emplace_back(drain);
    drain();
    for (auto& th : pool)
        th.join();
}

// Runs one cell body, stamping wall time and converting any failure into a
// flagged row instead of aborting the sweep.
template <typename Fn>
void guarded_cell(MetricRow& row, Fn&& body) {
    row.shd = row.sid = row.tvd_mean = row.tvd_sum = nan_value;
    const auto start = std::chrono::steady_clock::now();
    try {
        body();
    } catch (const std::exception& e) {
        row.shd = row.sid = row.tvd_mean = row.tvd_sum = nan_value;
        row.status = std::string("error: ") + e.what();
    }
    row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double treated_sum(const EffectTable& table) {
    EffectTable treated;
    for (const EffectEntry& e : table.entries)
        if (e.value == "1")
            treated.entries.push_back(e);
    if (treated.entries.empty())
        return nan_value;
    return aggregate_effects(treated, AggregateMode::sum);
}

}  // namespace

EffectTable all_pair_effects(const DiscreteBayesNet& truth, const DiscreteBayesNet& model) {
    EffectTable table;
    const Dag& g = truth.dag();
    for (int t = 0; t < g.num_variables(); ++t) {
        for (const std::string& v : truth.labels(t)) {
            for (int o = 0; o < g.num_variables(); ++o) {
                if (o == t)
                    continue;
                const CategoricalDistribution p =
                    interventional_distribution(truth, g.name(o), g.name(t), v);
                const CategoricalDistribution q =
                    interventional_distribution(model, g.name(o), g.name(t), v);
                table.entries.push_back({g.name(t), v, g.name(o), aligned_tvd(p, q)});
            }
        }
    }
    return table;
}

namespace {

std::string config_notes(const ExperimentConfig& cfg) {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "learner config: alpha=%g ess=%g max_cond_set=%s; master_seed=%llu",
                  cfg.learner.alpha, cfg.learner.ess,
                  cfg.learner.max_cond_set ? std::to_string(*cfg.learner.max_cond_set).c_str()
                                           : "adaptive",
                  static_cast<unsigned long long>(cfg.master_seed));
    return buf;
}

MetricReport run_synthetic(const ExperimentConfig& cfg, int workers) {
    const std::vector<std::string> algorithms = cfg.resolved_learners();
    const std::string name = experiment_name(cfg.experiment);
    const int per_trial = cfg.n_dags * static_cast<int>(algorithms.size());
    const int n_cells = cfg.trials * per_trial;
    std::vector<CellResult> slots(n_cells);

    parallel_for(n_cells, workers, [&](int i) {
        const int r = i / per_trial;
        const int d = (i % per_trial) / static_cast<int>(algorithms.size());
        const std::string algorithm = algorithms[i % algorithms.size()];
        const std::uint64_t seed = derive_seed(cfg.master_seed, {10, static_cast<std::uint64_t>(r),
                                                                 static_cast<std::uint64_t>(d)});
        MetricRow& row = slots[i].row;
        row.experiment = name;
        row.dataset = "dag" + std::to_string(d);
        row.trial = r;
        row.algorithm = algorithm;
        row.seed = seed;
        guarded_cell(row, [&] {
            const auto pair = synthetic_benchmark(1, cfg.n_vars, cfg.expected_neighbors,
                                                  cfg.n_samples, cfg.alpha_dirichlet, seed)[0];
            const DiscreteBayesNet& truth = pair.first;
            const Pdag learned =
                run_learner(learner_kind_from_name(algorithm), pair.second, cfg.learner);
            const NormalizedLearned norm = normalize_learned(learned);
            if (norm.extension_forced)
                row.status = "extension_forced";
            row.shd = shd(truth.dag(), norm.cpdag);
            row.sid = sid(truth.dag(), norm.dag);
            const DiscreteBayesNet fitted = fit_parameters(norm.dag, pair.second, 1.0);
            const EffectTable table = all_pair_effects(truth, fitted);
            row.tvd_mean = aggregate_effects(table, AggregateMode::mean);
            row.tvd_sum = treated_sum(table);
        });
    });

    MetricReport report;
    report.experiment = name;
    for (auto& slot : slots)
        report.rows.push_back(std::move(slot.row));
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "generator: n_dags=%d n_vars=%d expected_neighbors=%g n_samples=%d "
                  "alpha_dirichlet=%g trials=%d",
                  cfg.n_dags, cfg.n_vars, cfg.expected_neighbors, cfg.n_samples,
                  cfg.alpha_dirichlet, cfg.trials);
    report.notes.push_back(buf);
    report.notes.push_back(config_notes(cfg));
    return report;
}

MetricReport run_spec_error(const ExperimentConfig& cfg, int workers) {
    const std::string name = experiment_name(cfg.experiment);
    const int m = cfg.fixture.treatments;
    const int per_trial = m * 2;
    const int n_cells = cfg.trials * per_trial;
    std::vector<CellResult> slots(n_cells);

    parallel_for(n_cells, workers, [&](int i) {
        const int r = i / per_trial;
        const int tj = (i % per_trial) / 2;
        const AlterMode mode = (i % 2 == 0) ? AlterMode::overspecify : AlterMode::underspecify;
        const std::uint64_t seed = derive_seed(cfg.master_seed, {20, static_cast<std::uint64_t>(r)});
        MetricRow& row = slots[i].row;
        row.experiment = name;
        row.trial = r;
        row.algorithm = mode == AlterMode::overspecify ? "overspecify" : "underspecify";
        row.seed = seed;
        guarded_cell(row, [&] {
            const FactorialFixture fixture = synthesize_factorial_fixture(cfg.fixture, seed);
            const FactorialDataset prep = prepare_dataset(fixture.data, cfg.bins);
            const std::string treatment = prep.treatment_names().at(tj);
            row.dataset = "fixture:" + treatment;
            const Dataset flat = to_dataset(prep);
            const std::string cov =
                cfg.covariate.empty() ? prep.covariate_names().front() : cfg.covariate;
            const auto [cg, ledger] = consistent_dag(prep, cov, cfg.alpha_effects);
            const DiscreteBayesNet base = fit_parameters(cg, flat, 1.0);
            const DiscreteBayesNet altered =
                alter_model(base, treatment, prep.outcome_names(), mode, flat);
            row.shd = shd(cg, altered.dag());
            row.sid = sid(cg, altered.dag());
            EffectTable table;
            for (const std::string& outcome : prep.outcome_names()) {
                for (const std::string& v : {std::string("0"), std::string("1")}) {
                    const double d =
                        aligned_tvd(interventional_distribution(base, outcome, treatment, v),
                                    interventional_distribution(altered, outcome, treatment, v));
                    table.entries.push_back({treatment, v, outcome, d});
                }
            }
            row.tvd_mean = aggregate_effects(table, AggregateMode::mean);
            row.tvd_sum = treated_sum(table);
        });
        if (row.dataset.empty())
            row.dataset = "fixture:T" + std::to_string(tj + 1);
    });

    MetricReport report;
    report.experiment = name;
    for (auto& slot : slots)
        report.rows.push_back(std::move(slot.row));
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "fixture: subjects=%d treatments=%d outcomes=%d trials_per_cell=%d bins=%d "
                  "alpha_effects=%g",
                  cfg.fixture.subjects, cfg.fixture.treatments, cfg.fixture.outcomes,
                  cfg.fixture.trials, cfg.bins, cfg.alpha_effects);
    report.notes.push_back(buf);
    report.notes.push_back(config_notes(cfg));
    return report;
}

MetricReport run_empirical(const ExperimentConfig& cfg, int workers) {
    const std::string name = experiment_name(cfg.experiment);
    MetricReport report;
    report.experiment = name;

    // Deterministic preamble shared by every cell: the prepared dataset, the
    // effect set the interventional data itself declares, and its reference
    // interventional distributions.
    std::string dataset_id = "fixture";
    FactorialDataset raw = [&] {
        if (!cfg.factorial_csv.empty()) {
            dataset_id = std::filesystem::path(cfg.factorial_csv).stem().string();
            return FactorialDataset::load(cfg.factorial_csv, cfg.roles_json);
        }
        return synthesize_factorial_fixture(cfg.fixture, derive_seed(cfg.master_seed, {30})).data;
    }();
    std::vector<std::string> warnings;
    const FactorialDataset prep = prepare_dataset(raw, cfg.bins, {}, &warnings);
    for (const std::string& w : warnings)
        report.notes.push_back("prepare: " + w);
    const std::string cov = cfg.covariate.empty() ? prep.covariate_names().front() : cfg.covariate;
    const auto [consistent, ledger] = consistent_dag(prep, cov, cfg.alpha_effects);

    std::vector<std::pair<std::string, std::string>> effect_pairs;
    for (const EffectLedger::Entry& e : ledger.entries)
        if (e.causally_related)
            effect_pairs.emplace_back(e.treatment, e.outcome);
    std::vector<CategoricalDistribution> references;  // pair-major, t = 0 then 1
    for (const auto& [treatment, outcome] : effect_pairs)
        for (int t = 0; t < 2; ++t)
            references.push_back(empirical_do_distribution(prep, outcome, treatment, t));

    // The model's variables: the biasing covariate plus treatments and
    // outcomes. Other covariates are sampling artifacts, not modeled nodes.
    std::vector<std::string> model_columns = {cov};
    model_columns.insert(model_columns.end(), prep.treatment_names().begin(),
                         prep.treatment_names().end());
    model_columns.insert(model_columns.end(), prep.outcome_names().begin(),
                         prep.outcome_names().end());

    const std::vector<std::string> algorithms = cfg.resolved_learners();
    const int n_cells = cfg.trials * static_cast<int>(algorithms.size());
    std::vector<CellResult> slots(n_cells);

    parallel_for(n_cells, workers, [&](int i) {
        const int r = i / static_cast<int>(algorithms.size());
        const std::string algorithm = algorithms[i % algorithms.size()];
        const std::uint64_t seed =
            derive_seed(cfg.master_seed, {31, static_cast<std::uint64_t>(r),
                                          static_cast<std::uint64_t>(i % algorithms.size())});
        MetricRow& row = slots[i].row;
        row.experiment = name;
        row.dataset = dataset_id;
        row.trial = r;
        row.algorithm = algorithm;
        row.seed = seed;
        guarded_cell(row, [&] {
            const Dataset biased =
                logistic_bias_sample(prep, cfg.beta, cov, seed).select_columns(model_columns);
            const Pdag learned =
                run_learner(learner_kind_from_name(algorithm), biased, cfg.learner);
            const NormalizedLearned norm = normalize_learned(learned);
            if (norm.extension_forced)
                row.status = "extension_forced";
            row.shd = shd(consistent, norm.cpdag);
            row.sid = sid(consistent, norm.dag);
            if (effect_pairs.empty()) {
                row.status = "no_effects";
                return;
            }
            const DiscreteBayesNet fitted = fit_parameters(norm.dag, biased, 1.0);
            EffectTable table;
            std::size_t ref = 0;
            for (const auto& [treatment, outcome] : effect_pairs) {
                for (int t = 0; t < 2; ++t) {
                    const double d = aligned_tvd(
                        interventional_distribution(fitted, outcome, treatment, std::to_string(t)),
                        references[ref++]);
                    table.entries.push_back({treatment, std::to_string(t), outcome, d});
                }
            }
            row.tvd_mean = aggregate_effects(table, AggregateMode::mean);
            row.tvd_sum = treated_sum(table);
            slots[i].effects = table.entries;
        });
    });

    // Per-effect mean TVD across the cells that produced a full table.
    const std::size_t n_effects = effect_pairs.size() * 2;
    std::vector<double> sums(n_effects, 0.0);
    int contributing = 0;
    for (const CellResult& slot : slots) {
        if (slot.effects.size() != n_effects)
            continue;
        ++contributing;
        for (std::size_t k = 0; k < n_effects; ++k)
            sums[k] += slot.effects[k].tvd;
    }
    if (contributing > 0) {
        std::size_t k = 0;
        for (const auto& [treatment, outcome] : effect_pairs)
            for (int t = 0; t < 2; ++t, ++k)
                report.effects.entries.push_back(
                    {treatment, std::to_string(t), outcome, sums[k] / contributing});
    }

    for (auto& slot : slots)
        report.rows.push_back(std::move(slot.row));
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "bias: beta=%g covariate=%s bins=%d; effects: %zu significant pairs at alpha=%g",
                  cfg.beta, cov.c_str(), cfg.bins, effect_pairs.size(), cfg.alpha_effects);
    report.notes.push_back(buf);
    report.notes.push_back(config_notes(cfg));
    return report;
}

bool is_error(const MetricRow& row) { return row.status.rfind("error", 0) == 0; }

nlohmann::ordered_json stat_block(const std::vector<double>& values) {
    if (values.empty())
        return nullptr;
    nlohmann::ordered_json j;
    double total = 0.0;
    double lo = values.front(), hi = values.front();
    for (double v : values) {
        total += v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    j["mean"] = total / static_cast<double>(values.size());
    j["median"] = median(values);
    j["min"] = lo;
    j["max"] = hi;
    return j;
}

nlohmann::ordered_json correlation_value(const MetricReport& report, double MetricRow::* x,
                                         double MetricRow::* y) {
    std::vector<double> a, b;
    for (const MetricRow& row : report.rows) {
        const double vx = row.*x, vy = row.*y;
        if (std::isfinite(vx) && std::isfinite(vy)) {
            a.push_back(vx);
            b.push_back(vy);
        }
    }
    const double rho = spearman(a, b);
    if (std::isnan(rho))
        return nullptr;
    return rho;
}

}  // namespace

const char* experiment_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::correlation: return "correlation";
        case ExperimentKind::algo_compare: return "algo_compare";
        case ExperimentKind::spec_error: return "spec_error";
        case ExperimentKind::empirical_pipeline: return "empirical_pipeline";
    }
    throw ParameterError("experiment_name: unknown kind");
}

ExperimentKind experiment_kind_from_name(const std::string& name) {
    for (ExperimentKind kind : {ExperimentKind::correlation, ExperimentKind::algo_compare,
                                ExperimentKind::spec_error, ExperimentKind::empirical_pipeline})
        if (name == experiment_name(kind))
            return kind;
    throw ConfigError("unknown experiment name: '" + name + "'");
}

std::vector<std::string> ExperimentConfig::resolved_learners() const {
    if (!learners.empty())
        return learners;
    if (experiment == ExperimentKind::algo_compare)
        return {"pc", "ges", "mmhc"};
    if (experiment == ExperimentKind::spec_error)
        return {};
    return {"ges"};
}

int resolve_workers(int requested) {
    if (requested > 0)
        return requested;
    const char* env = std::getenv("CAUSAL_EVAL_WORKERS");
    if (env != nullptr && *env != '\0') {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end == nullptr || *end != '\0' || n < 1)
            throw ConfigError("CAUSAL_EVAL_WORKERS must be a positive integer, got '" +
                              std::string(env) + "'");
        return static_cast<int>(n);
    }
    return 1;
}

MetricReport run_experiment(const ExperimentConfig& config, int workers) {
    const int w = resolve_workers(workers);
    switch (config.experiment) {
        case ExperimentKind::correlation:
        case ExperimentKind::algo_compare:
            return run_synthetic(config, w);
        case ExperimentKind::spec_error:
            return run_spec_error(config, w);
        case ExperimentKind::empirical_pipeline:
            return run_empirical(config, w);
    }
    throw ConfigError("run_experiment: unknown experiment");
}

nlohmann::ordered_json summary_json(const MetricReport& report) {
    nlohmann::ordered_json j;
    j["experiment"] = report.experiment;
    j["row_count"] = report.rows.size();

    std::vector<std::string> order;
    for (const MetricRow& row : report.rows)
        if (std::find(order.begin(), order.end(), row.algorithm) == order.end())
            order.push_back(row.algorithm);

    nlohmann::ordered_json algorithms = nlohmann::ordered_json::object();
    for (const std::string& algorithm : order) {
        nlohmann::ordered_json block;
        int cells = 0, failed = 0;
        std::map<std::string, std::vector<double>> metric_values;
        for (const MetricRow& row : report.rows) {
            if (row.algorithm != algorithm)
                continue;
            ++cells;
            if (is_error(row))
                ++failed;
            const std::pair<const char*, double> metrics[] = {{"shd", row.shd},
                                                              {"sid", row.sid},
                                                              {"tvd_mean", row.tvd_mean},
                                                              {"tvd_sum", row.tvd_sum}};
            for (const auto& [key, value] : metrics)
                if (std::isfinite(value))
                    metric_values[key].push_back(value);
        }
        block["cells"] = cells;
        block["failed"] = failed;
        for (const char* key : {"shd", "sid", "tvd_mean", "tvd_sum"})
            block[key] = stat_block(metric_values[key]);
        algorithms[algorithm] = std::move(block);
    }
    j["algorithms"] = std::move(algorithms);

    nlohmann::ordered_json rho;
    rho["shd_sid"] = correlation_value(report, &MetricRow::shd, &MetricRow::sid);
    rho["shd_tvd_mean"] = correlation_value(report, &MetricRow::shd, &MetricRow::tvd_mean);
    rho["sid_tvd_mean"] = correlation_value(report, &MetricRow::sid, &MetricRow::tvd_mean);
    j["spearman"] = std::move(rho);
    j["notes"] = report.notes;
    return j;
}

void emit_report(const MetricReport& report, const std::string& output_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(output_dir, ec);
    if (ec)
        throw DataError("cannot create output directory " + output_dir + ": " + ec.message());
    auto open = [&](const std::string& file) {
        std::ofstream out(fs::path(output_dir) / file, std::ios::binary);
        if (!out)
            throw DataError("cannot write " + (fs::path(output_dir) / file).string());
        return out;
    };

    {
        std::ofstream out = open("rows.csv");
        write_csv_row(out, {"experiment", "dataset", "trial", "algorithm", "shd", "sid",
                            "tvd_mean", "tvd_sum", "seed", "status"});
        for (const MetricRow& row : report.rows)
            write_csv_row(out, {row.experiment, row.dataset, std::to_string(row.trial),
                                row.algorithm, format_value(row.shd), format_value(row.sid),
                                format_value(row.tvd_mean), format_value(row.tvd_sum),
                                std::to_string(row.seed), row.status});
    }
    {
        std::ofstream out = open("summary.json");
        out << summary_json(report).dump(2) << '\n';
    }
    {
        std::ofstream out = open("effects.csv");
        write_csv_row(out, {"treatment", "value", "outcome", "tvd"});
        for (const EffectEntry& e : report.effects.entries)
            write_csv_row(out, {e.treatment, e.value, e.outcome, format_value(e.tvd)});
    }
    const std::pair<const char*, double MetricRow::*> metrics[] = {
        {"shd", &MetricRow::shd}, {"sid", &MetricRow::sid}, {"tvd_mean", &MetricRow::tvd_mean}};
    const std::pair<int, int> pairs[] = {{0, 1}, {0, 2}, {1, 2}};
    for (const auto& [first, second] : pairs) {
        std::ofstream out =
            open(std::string("scatter_") + metrics[first].first + "_" + metrics[second].first +
                 ".csv");
        write_csv_row(out,
                      {"dataset", "trial", "algorithm", metrics[first].first, metrics[second].first});
        for (const MetricRow& row : report.rows) {
            const double x = row.*(metrics[first].second), y = row.*(metrics[second].second);
            if (std::isfinite(x) && std::isfinite(y))
                write_csv_row(out, {row.dataset, std::to_string(row.trial), row.algorithm,
                                    format_value(x), format_value(y)});
        }
    }
    {
        std::ofstream out = open("timings.csv");
        write_csv_row(out, {"experiment", "dataset", "trial", "algorithm", "wall_time"});
        for (const MetricRow& row : report.rows) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.6f", row.wall_time);
            write_csv_row(out, {row.experiment, row.dataset, std::to_string(row.trial),
                                row.algorithm, buf});
        }
    }
}

// --- config parsing ---

namespace {

void require_keys(const nlohmann::json& j, const std::set<std::string>& known,
                  const std::string& where) {
    for (const auto& item : j.items())
        if (known.find(item.key()) == known.end())
            throw ConfigError("unknown config key" + (where.empty() ? "" : " in " + where) +
                              ": '" + item.key() + "'");
}

double get_number(const nlohmann::json& j, const std::string& key, double fallback) {
    if (!j.contains(key))
        return fallback;
    if (!j.at(key).is_number())
        throw ConfigError("config key '" + key + "' must be a number");
    return j.at(key).get<double>();
}

int get_int(const nlohmann::json& j, const std::string& key, int fallback) {
    if (!j.contains(key))
        return fallback;
    if (!j.at(key).is_number_integer())
        throw ConfigError("config key '" + key + "' must be an integer");
    return j.at(key).get<int>();
}

std::string get_string(const nlohmann::json& j, const std::string& key, std::string fallback) {
    if (!j.contains(key))
        return fallback;
    if (!j.at(key).is_string())
        throw ConfigError("config key '" + key + "' must be a string");
    return j.at(key).get<std::string>();
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    if (!j.is_object())
        throw ConfigError("config must be a JSON object");
    require_keys(j, {"experiment", "learners", "n_dags", "n_vars", "expected_neighbors",
                     "n_samples", "alpha_dirichlet", "beta", "covariate", "bins",
                     "learner_config", "trials", "master_seed", "output_dir", "factorial",
                     "roles", "alpha_effects", "fixture"},
                 "");
    if (!j.contains("experiment"))
        throw ConfigError("config requires an 'experiment' name");

    ExperimentConfig cfg;
    cfg.experiment = experiment_kind_from_name(get_string(j, "experiment", ""));
    if (j.contains("learners")) {
        if (!j.at("learners").is_array())
            throw ConfigError("config key 'learners' must be an array of algorithm names");
        for (const auto& item : j.at("learners")) {
            if (!item.is_string())
                throw ConfigError("config key 'learners' must be an array of algorithm names");
            const std::string name = item.get<std::string>();
            learner_kind_from_name(name);  // validates
            cfg.learners.push_back(name);
        }
    }
    cfg.n_dags = get_int(j, "n_dags", cfg.n_dags);
    cfg.n_vars = get_int(j, "n_vars", cfg.n_vars);
    cfg.expected_neighbors = get_number(j, "expected_neighbors", cfg.expected_neighbors);
    cfg.n_samples = get_int(j, "n_samples", cfg.n_samples);
    cfg.alpha_dirichlet = get_number(j, "alpha_dirichlet", cfg.alpha_dirichlet);
    cfg.beta = get_number(j, "beta", cfg.beta);
    cfg.covariate = get_string(j, "covariate", cfg.covariate);
    cfg.bins = get_int(j, "bins", cfg.bins);
    cfg.trials = get_int(j, "trials", cfg.trials);
    if (j.contains("master_seed")) {
        const auto& seed = j.at("master_seed");
        if (!seed.is_number_unsigned())
            throw ConfigError("config key 'master_seed' must be a nonnegative integer");
        cfg.master_seed = seed.get<std::uint64_t>();
    }
    cfg.output_dir = get_string(j, "output_dir", cfg.output_dir);
    cfg.factorial_csv = get_string(j, "factorial", cfg.factorial_csv);
    cfg.roles_json = get_string(j, "roles", cfg.roles_json);
    cfg.alpha_effects = get_number(j, "alpha_effects", cfg.alpha_effects);

    if (j.contains("learner_config")) {
        const auto& lc = j.at("learner_config");
        if (!lc.is_object())
            throw ConfigError("config key 'learner_config' must be an object");
        require_keys(lc, {"alpha", "ess", "max_cond_set"}, "learner_config");
        cfg.learner.alpha = get_number(lc, "alpha", cfg.learner.alpha);
        cfg.learner.ess = get_number(lc, "ess", cfg.learner.ess);
        if (lc.contains("max_cond_set"))
            cfg.learner.max_cond_set = get_int(lc, "max_cond_set", 0);
    }
    if (j.contains("fixture")) {
        const auto& fx = j.at("fixture");
        if (!fx.is_object())
            throw ConfigError("config key 'fixture' must be an object");
        require_keys(fx, {"subjects", "treatments", "outcomes", "trials", "covariate_levels",
                          "multiplier", "subject_sigma", "noise_sigma"},
                     "fixture");
        cfg.fixture.subjects = get_int(fx, "subjects", cfg.fixture.subjects);
        cfg.fixture.treatments = get_int(fx, "treatments", cfg.fixture.treatments);
        cfg.fixture.outcomes = get_int(fx, "outcomes", cfg.fixture.outcomes);
        cfg.fixture.trials = get_int(fx, "trials", cfg.fixture.trials);
        cfg.fixture.covariate_levels = get_int(fx, "covariate_levels", cfg.fixture.covariate_levels);
        cfg.fixture.multiplier = get_number(fx, "multiplier", cfg.fixture.multiplier);
        cfg.fixture.subject_sigma = get_number(fx, "subject_sigma", cfg.fixture.subject_sigma);
        cfg.fixture.noise_sigma = get_number(fx, "noise_sigma", cfg.fixture.noise_sigma);
        if (cfg.fixture.subjects < 1 || cfg.fixture.treatments < 1 || cfg.fixture.outcomes < 1 ||
            cfg.fixture.trials < 1 || cfg.fixture.covariate_levels < 1)
            throw ConfigError("fixture counts must be positive");
        if (!(cfg.fixture.multiplier > 0.0) || cfg.fixture.subject_sigma < 0.0 ||
            cfg.fixture.noise_sigma < 0.0)
            throw ConfigError("fixture multiplier must be positive and sigmas nonnegative");
    }

    if (cfg.trials < 1)
        throw ConfigError("config key 'trials' must be at least 1");
    if (cfg.n_dags < 0)
        throw ConfigError("config key 'n_dags' must be nonnegative");
    if (cfg.n_vars < 2)
        throw ConfigError("config key 'n_vars' must be at least 2");
    if (cfg.n_samples < 0)
        throw ConfigError("config key 'n_samples' must be nonnegative");
    if (!(cfg.expected_neighbors >= 0.0) ||
        cfg.expected_neighbors > static_cast<double>(cfg.n_vars - 1))
        throw ConfigError("config key 'expected_neighbors' must lie in [0, n_vars - 1]");
    if (!(cfg.alpha_dirichlet > 0.0))
        throw ConfigError("config key 'alpha_dirichlet' must be positive");
    if (!(cfg.beta >= 0.0))
        throw ConfigError("config key 'beta' must be nonnegative");
    if (cfg.bins < 2)
        throw ConfigError("config key 'bins' must be at least 2");
    if (!(cfg.alpha_effects > 0.0 && cfg.alpha_effects < 1.0))
        throw ConfigError("config key 'alpha_effects' must lie in (0, 1)");
    if (!(cfg.learner.alpha > 0.0 && cfg.learner.alpha < 1.0))
        throw ConfigError("learner_config alpha must lie in (0, 1)");
    if (!(cfg.learner.ess > 0.0))
        throw ConfigError("learner_config ess must be positive");
    if (cfg.factorial_csv.empty() != cfg.roles_json.empty())
        throw ConfigError("config keys 'factorial' and 'roles' must be given together");
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot read config file: " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return from_json(j);
}

// --- JSON-schema subset validation ---

namespace {

const nlohmann::json* resolve_ref(const nlohmann::json& root, const std::string& ref,
                                  std::vector<std::string>& errors) {
    if (ref.rfind("#/", 0) != 0) {
        errors.push_back("unsupported $ref: " + ref);
        return nullptr;
    }
    const nlohmann::json* node = &root;
    std::string segment;
    std::istringstream parts(ref.substr(2));
    while (std::getline(parts, segment, '/')) {
        if (!node->is_object() || !node->contains(segment)) {
            errors.push_back("unresolvable $ref: " + ref);
            return nullptr;
        }
        node = &node->at(segment);
    }
    return node;
}

bool type_matches(const nlohmann::json& value, const std::string& type) {
    if (type == "object") return value.is_object();
    if (type == "array") return value.is_array();
    if (type == "string") return value.is_string();
    if (type == "number") return value.is_number();
    if (type == "integer") return value.is_number_integer();
    if (type == "boolean") return value.is_boolean();
    if (type == "null") return value.is_null();
    return false;
}

std::string type_name(const nlohmann::json& value) {
    if (value.is_object()) return "object";
    if (value.is_array()) return "array";
    if (value.is_string()) return "string";
    if (value.is_number_integer()) return "integer";
    if (value.is_number()) return "number";
    if (value.is_boolean()) return "boolean";
    return "null";
}

void validate_node(const nlohmann::json& value, const nlohmann::json& schema,
                   const nlohmann::json& root, const std::string& path,
                   std::vector<std::string>& errors) {
    if (!schema.is_object()) {
        errors.push_back(path + ": schema node must be an object");
        return;
    }
    if (schema.contains("$ref")) {
        const nlohmann::json* target = resolve_ref(root, schema.at("$ref").get<std::string>(), errors);
        if (target != nullptr)
            validate_node(value, *target, root, path, errors);
        return;
    }
    if (schema.contains("oneOf")) {
        int matches = 0;
        for (const auto& branch : schema.at("oneOf")) {
            std::vector<std::string> scratch;
            validate_node(value, branch, root, path, scratch);
            if (scratch.empty())
                ++matches;
        }
        if (matches != 1)
            errors.push_back(path + ": matches " + std::to_string(matches) +
                             " oneOf branches, expected exactly 1");
        return;
    }
    if (schema.contains("type")) {
        const auto& t = schema.at("type");
        bool ok = false;
        if (t.is_string()) {
            ok = type_matches(value, t.get<std::string>());
        } else if (t.is_array()) {
            for (const auto& option : t)
                ok = ok || type_matches(value, option.get<std::string>());
        }
        if (!ok) {
            errors.push_back(path + ": expected type " + t.dump() + ", got " + type_name(value));
            return;
        }
    }
    if (schema.contains("enum")) {
        bool found = false;
        for (const auto& option : schema.at("enum"))
            found = found || option == value;
        if (!found)
            errors.push_back(path + ": value " + value.dump() + " not in enum");
    }
    if (schema.contains("minimum") && value.is_number() &&
        value.get<double>() < schema.at("minimum").get<double>())
        errors.push_back(path + ": value below minimum " + schema.at("minimum").dump());
    if (value.is_object()) {
        if (schema.contains("required"))
            for (const auto& key : schema.at("required"))
                if (!value.contains(key.get<std::string>()))
                    errors.push_back(path + ": missing required member '" +
                                     key.get<std::string>() + "'");
        const nlohmann::json empty = nlohmann::json::object();
        const nlohmann::json& props = schema.contains("properties") ? schema.at("properties") : empty;
        for (const auto& item : value.items()) {
            const std::string child = path + "/" + item.key();
            if (props.contains(item.key())) {
                validate_node(item.value(), props.at(item.key()), root, child, errors);
            } else if (schema.contains("additionalProperties")) {
                const auto& extra = schema.at("additionalProperties");
                if (extra.is_boolean() && !extra.get<bool>())
                    errors.push_back(path + ": unexpected member '" + item.key() + "'");
                else if (extra.is_object())
                    validate_node(item.value(), extra, root, child, errors);
            }
        }
    }
    if (value.is_array() && schema.contains("items")) {
        int index = 0;
        for (const auto& element : value)
            validate_node(element, schema.at("items"), root,
                          path + "/" + std::to_string(index++), errors);
    }
}

}  // namespace

std::vector<std::string> validate_schema(const nlohmann::json& value,
                                         const nlohmann::json& schema) {
    std::vector<std::string> errors;
    validate_node(value, schema, schema, "", errors);
    return errors;
}

}  // namespace causal
