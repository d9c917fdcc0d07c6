#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "causal/datagen.hpp"
#include "causal/learners.hpp"
#include "causal/metrics.hpp"

namespace causal {

enum class ExperimentKind { correlation, algo_compare, spec_error, empirical_pipeline };

ExperimentKind experiment_kind_from_name(const std::string& name);  // ConfigError
const char* experiment_name(ExperimentKind kind);

// One experiment run, fully determined by this struct: the study to execute,
// the algorithms to compare, the generator/biasing knobs, and the master seed
// every per-cell seed is derived from. Unknown keys in the JSON form are
// rejected so typos cannot silently fall back to defaults.
struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::correlation;
    std::vector<std::string> learners;  // validated names; empty = per-experiment default

    // Synthetic-benchmark generator.
    int n_dags = 30;
    int n_vars = 14;
    double expected_neighbors = 2.0;
    int n_samples = 5000;
    double alpha_dirichlet = 1.0;

    // Observational biasing.
    double beta = 2.0;
    std::string covariate;  // empty = the dataset's first covariate column
    int bins = 3;

    LearnerConfig learner;
    int trials = 1;
    std::uint64_t master_seed = 0;
    std::string output_dir = "out";

    // Factorial input for empirical_pipeline; a synthesized fixture is used
    // when no files are given (also the data source for spec_error).
    std::string factorial_csv;
    std::string roles_json;
    double alpha_effects = 0.05;  // significance level for the ground-truth effect set
    FixtureParams fixture;

    static ExperimentConfig from_json(const nlohmann::json& j);
    static ExperimentConfig load(const std::string& path);

    std::vector<std::string> resolved_learners() const;
};

// One evaluated cell. Metrics that a cell cannot produce (a failed cell, or
// tvd columns when no effects exist) are NaN and serialize as NA.
struct MetricRow {
    std::string experiment;
    std::string dataset;
    int trial = 0;
    std::string algorithm;
    double shd = 0.0;
    double sid = 0.0;
    double tvd_mean = 0.0;
    double tvd_sum = 0.0;
    double wall_time = 0.0;  // seconds; reported separately from the deterministic files
    std::uint64_t seed = 0;
    std::string status = "ok";  // ok | extension_forced | no_effects | error: <what>
};

struct MetricReport {
    std::string experiment;
    std::vector<MetricRow> rows;
    // Per-effect mean TVD across cells, where the experiment defines a fixed
    // effect set (empirical_pipeline); empty otherwise.
    EffectTable effects;
    std::vector<std::string> notes;  // hyperparameter log lines
};

// do(T = v) shift of every other variable, model against truth, over every
// (treatment, value, outcome) triple of the truth's variables.
EffectTable all_pair_effects(const DiscreteBayesNet& truth, const DiscreteBayesNet& model);

// Positive counts win; otherwise the CAUSAL_EVAL_WORKERS environment
// variable; otherwise 1.
int resolve_workers(int requested);

// Executes the configured study. Cells run on `workers` threads with seeds
// derived per cell, so the report content is identical for every worker
// count; a failing cell is flagged in its row and the run continues.
MetricReport run_experiment(const ExperimentConfig& config, int workers = 0);

// Aggregates: per-algorithm mean/median/min/max for each metric plus Spearman
// rank correlations between metric pairs, over the rows that carry the
// metric. Unavailable values are null.
nlohmann::ordered_json summary_json(const MetricReport& report);

// Writes rows.csv, summary.json, scatter_<pair>.csv for the three metric
// pairs, effects.csv, and timings.csv (the only file that varies run to run)
// into output_dir, creating it if needed.
void emit_report(const MetricReport& report, const std::string& output_dir);

// Minimal JSON-schema check covering the subset the shipped schemas use:
// type (single or list), enum, required, properties, additionalProperties,
// items, minimum, oneOf, and $ref into the root document. Returns one message
// per violation.
std::vector<std::string> validate_schema(const nlohmann::json& value,
                                         const nlohmann::json& schema);

}  // namespace causal
