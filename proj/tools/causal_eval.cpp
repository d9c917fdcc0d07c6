// causal-eval: data generation, observational biasing, structure learning,
// model evaluation, and full experiment runs over one command-line surface.
//
// Exit codes: 0 success, 2 configuration error (bad flags, bad config file),
// 3 data error (unreadable, malformed, or inconsistent inputs).

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "causal/bench.hpp"
#include "causal/csv.hpp"
#include "causal/datagen.hpp"
#include "causal/errors.hpp"
#include "causal/groundtruth.hpp"
#include "causal/metrics.hpp"
#include "causal/obsbias.hpp"

namespace fs = std::filesystem;
using namespace causal;

namespace {

std::ofstream open_output(const fs::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        if (ec)
            throw DataError("cannot create directory " + path.parent_path().string() + ": " +
                            ec.message());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot write " + path.string());
    return out;
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot read " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError("malformed JSON in " + path + ": " + e.what());
    }
}

Dataset read_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot read " + path);
    return Dataset::read_csv(in);
}

// Model files are either a bare network or a wrapper with a "model" member
// (the `learn` output, which carries provenance next to the network).
DiscreteBayesNet read_model(const std::string& path) {
    const nlohmann::json j = read_json(path);
    try {
        if (j.is_object() && j.contains("model"))
            return DiscreteBayesNet::from_json(j.at("model"));
        return DiscreteBayesNet::from_json(j);
    } catch (const std::exception& e) {
        throw DataError("cannot load model from " + path + ": " + e.what());
    }
}

struct GenOptions {
    std::string kind = "benchmark";
    std::string out = "gen_out";
    std::uint64_t seed = 0;
    int n_dags = 30;
    int n_vars = 14;
    double expected_neighbors = 2.0;
    int n_samples = 5000;
    double alpha_dirichlet = 1.0;
    FixtureParams fixture;
};

void run_gen(const GenOptions& opt) {
    fs::create_directories(opt.out);
    if (opt.kind == "benchmark") {
        const auto pairs = synthetic_benchmark(opt.n_dags, opt.n_vars, opt.expected_neighbors,
                                               opt.n_samples, opt.alpha_dirichlet, opt.seed);
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            std::ofstream data = open_output(fs::path(opt.out) / ("data_" + std::to_string(i) +
                                                                  ".csv"));
            pairs[i].second.write_csv(data);
            std::ofstream truth = open_output(fs::path(opt.out) / ("truth_" + std::to_string(i) +
                                                                   ".json"));
            truth << pairs[i].first.to_json().dump(2) << '\n';
        }
        std::cout << "wrote " << pairs.size() << " dataset/truth pairs to " << opt.out << '\n';
        return;
    }
    const FactorialFixture fixture = synthesize_factorial_fixture(opt.fixture, opt.seed);
    const fs::path csv = fs::path(opt.out) / "factorial.csv";
    const fs::path roles = fs::path(opt.out) / "roles.json";
    fixture.data.save(csv.string(), roles.string());
    std::ofstream effects = open_output(fs::path(opt.out) / "true_effects.csv");
    write_csv_row(effects, {"treatment", "outcome"});
    for (const auto& [treatment, outcome] : fixture.true_effects)
        write_csv_row(effects, {treatment, outcome});
    std::cout << "wrote factorial fixture (" << fixture.data.num_subjects() << " subjects, "
              << fixture.data.num_treatments() << " treatments) to " << opt.out << '\n';
}

struct BiasOptions {
    std::string factorial, roles, covariate, out = "biased.csv";
    double beta = 2.0;
    std::uint64_t seed = 0;
    std::string mode = "single_draw";
    int prepare_bins = 0;  // 0 = sample the raw grid
};

void run_bias(const BiasOptions& opt) {
    FactorialDataset data = FactorialDataset::load(opt.factorial, opt.roles);
    if (opt.prepare_bins > 0) {
        std::vector<std::string> warnings;
        data = prepare_dataset(data, opt.prepare_bins, {}, &warnings);
        for (const std::string& w : warnings)
            std::cerr << "warning: " << w << '\n';
    }
    const std::string covariate =
        opt.covariate.empty() ? data.covariate_names().front() : opt.covariate;
    const BiasMode mode =
        opt.mode == "all_trials" ? BiasMode::all_trials : BiasMode::single_draw;
    const Dataset sample = logistic_bias_sample(data, opt.beta, covariate, opt.seed, mode);
    std::ofstream out = open_output(opt.out);
    sample.write_csv(out);
    std::cout << "wrote " << sample.num_rows() << " biased records to " << opt.out << '\n';
}

struct LearnOptions {
    std::string data, algorithm = "ges", out = "model.json";
    LearnerConfig config;
    int max_cond_set = -1;
};

void run_learn(const LearnOptions& opt) {
    const Dataset data = read_dataset(opt.data);
    LearnerConfig config = opt.config;
    if (opt.max_cond_set >= 0)
        config.max_cond_set = opt.max_cond_set;
    const Pdag learned = run_learner(learner_kind_from_name(opt.algorithm), data, config);
    const NormalizedLearned norm = normalize_learned(learned);
    if (norm.extension_forced)
        std::cerr << "warning: learner output admitted no consistent extension; "
                     "orientations were forced\n";
    const DiscreteBayesNet fitted = fit_parameters(norm.dag, data, 1.0);
    nlohmann::json j;
    j["algorithm"] = opt.algorithm;
    j["extension_forced"] = norm.extension_forced;
    j["model"] = fitted.to_json();
    std::ofstream out = open_output(opt.out);
    out << j.dump(2) << '\n';
    std::cout << "wrote fitted " << opt.algorithm << " model (" << norm.dag.edge_count()
              << " edges) to " << opt.out << '\n';
}

struct EvalOptions {
    std::string truth, model, out;
};

void run_eval(const EvalOptions& opt) {
    const DiscreteBayesNet truth = read_model(opt.truth);
    const DiscreteBayesNet model = read_model(opt.model);
    const EffectTable table = all_pair_effects(truth, model);
    EffectTable treated;
    for (const EffectEntry& e : table.entries)
        if (e.value == "1")
            treated.entries.push_back(e);
    nlohmann::ordered_json j;
    j["shd"] = shd(truth.dag(), model.dag());
    j["sid"] = sid(truth.dag(), model.dag());
    j["tvd_mean"] = aggregate_effects(table, AggregateMode::mean);
    if (!treated.entries.empty())
        j["tvd_sum"] = aggregate_effects(treated, AggregateMode::sum);
    else
        j["tvd_sum"] = nullptr;
    if (opt.out.empty()) {
        std::cout << j.dump(2) << '\n';
    } else {
        std::ofstream out = open_output(opt.out);
        out << j.dump(2) << '\n';
        std::cout << "wrote metrics to " << opt.out << '\n';
    }
}

struct ExperimentOptions {
    std::string config, out;
    int workers = 0;
    std::uint64_t seed = 0;
    bool seed_given = false;
};

void run_experiment_cmd(const ExperimentOptions& opt) {
    ExperimentConfig cfg = ExperimentConfig::load(opt.config);
    if (!opt.out.empty())
        cfg.output_dir = opt.out;
    if (opt.seed_given)
        cfg.master_seed = opt.seed;
    const MetricReport report = run_experiment(cfg, opt.workers);
    emit_report(report, cfg.output_dir);
    int failed = 0;
    for (const MetricRow& row : report.rows)
        if (row.status.rfind("error", 0) == 0)
            ++failed;
    std::cout << report.experiment << ": " << report.rows.size() << " rows ("
              << failed << " failed) -> " << cfg.output_dir << '\n';
}

struct ValidateOptions {
    std::string factorial, roles, summary, schema;
};

void run_validate(const ValidateOptions& opt) {
    if (!opt.factorial.empty()) {
        const FactorialDataset data = FactorialDataset::load(opt.factorial, opt.roles);
        std::cout << "ok: " << data.num_subjects() << " subjects, " << data.num_treatments()
                  << " treatments, " << data.num_trials() << " trials, "
                  << data.outcome_names().size() << " outcomes (" << data.num_cells()
                  << " cells)\n";
    }
    if (!opt.summary.empty()) {
        const std::vector<std::string> errors =
            validate_schema(read_json(opt.summary), read_json(opt.schema));
        if (!errors.empty()) {
            for (const std::string& e : errors)
                std::cerr << opt.summary << e << '\n';
            throw DataError(opt.summary + " does not conform to " + opt.schema);
        }
        std::cout << "ok: " << opt.summary << " conforms to " << opt.schema << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Causal-evaluation harness: synthetic benchmarks, factorial biasing, "
                 "structure learning, and interventional-accuracy scoring"};
    app.require_subcommand(1);

    GenOptions gen;
    CLI::App* sub_gen = app.add_subcommand("gen", "Generate benchmark or fixture data");
    sub_gen->add_option("--kind", gen.kind, "benchmark | fixture")
        ->check(CLI::IsMember({"benchmark", "fixture"}));
    sub_gen->add_option("--out", gen.out, "Output directory")->required();
    sub_gen->add_option("--seed", gen.seed, "Master seed");
    sub_gen->add_option("--n-dags", gen.n_dags, "Benchmark: number of DAGs");
    sub_gen->add_option("--n-vars", gen.n_vars, "Benchmark: variables per DAG");
    sub_gen->add_option("--expected-neighbors", gen.expected_neighbors,
                        "Benchmark: expected neighborhood size");
    sub_gen->add_option("--n-samples", gen.n_samples, "Benchmark: records per dataset");
    sub_gen->add_option("--alpha-dirichlet", gen.alpha_dirichlet,
                        "Benchmark: Dirichlet concentration");
    sub_gen->add_option("--subjects", gen.fixture.subjects, "Fixture: subjects");
    sub_gen->add_option("--treatments", gen.fixture.treatments, "Fixture: binary treatments");
    sub_gen->add_option("--outcomes", gen.fixture.outcomes, "Fixture: outcome columns");
    sub_gen->add_option("--trials", gen.fixture.trials, "Fixture: trials per cell");
    sub_gen->add_option("--levels", gen.fixture.covariate_levels, "Fixture: covariate levels");

    BiasOptions bias;
    CLI::App* sub_bias = app.add_subcommand("bias", "Observational sample from a factorial grid");
    sub_bias->add_option("--factorial", bias.factorial, "Factorial CSV")->required();
    sub_bias->add_option("--roles", bias.roles, "Roles sidecar JSON")->required();
    sub_bias->add_option("--beta", bias.beta, "Selection strength");
    sub_bias->add_option("--covariate", bias.covariate, "Biasing covariate (default: first)");
    sub_bias->add_option("--seed", bias.seed, "Sampling seed");
    sub_bias->add_option("--mode", bias.mode, "single_draw | all_trials")
        ->check(CLI::IsMember({"single_draw", "all_trials"}));
    sub_bias->add_option("--prepare-bins", bias.prepare_bins,
                         "Normalize and discretize into this many bins first (0 = raw)");
    sub_bias->add_option("--out", bias.out, "Output CSV")->required();

    LearnOptions learn;
    CLI::App* sub_learn = app.add_subcommand("learn", "Learn and fit a causal model");
    sub_learn->add_option("--data", learn.data, "Input CSV")->required();
    sub_learn->add_option("--algorithm", learn.algorithm, "pc | ges | mmhc")
        ->check(CLI::IsMember({"pc", "ges", "mmhc"}));
    sub_learn->add_option("--alpha", learn.config.alpha, "CI-test significance level");
    sub_learn->add_option("--ess", learn.config.ess, "Score equivalent sample size");
    sub_learn->add_option("--max-cond-set", learn.max_cond_set,
                          "Conditioning-set cap (default adaptive)");
    sub_learn->add_option("--out", learn.out, "Output model JSON")->required();

    EvalOptions eval;
    CLI::App* sub_eval = app.add_subcommand("eval", "Score a model against a ground truth");
    sub_eval->add_option("--truth", eval.truth, "Ground-truth model JSON")->required();
    sub_eval->add_option("--model", eval.model, "Learned model JSON")->required();
    sub_eval->add_option("--out", eval.out, "Output JSON (default: stdout)");

    ExperimentOptions experiment;
    CLI::App* sub_exp = app.add_subcommand("experiment", "Run a configured experiment");
    sub_exp->add_option("--config", experiment.config, "Experiment config JSON")->required();
    sub_exp->add_option("--out", experiment.out, "Output directory (overrides the config)");
    sub_exp->add_option("--workers", experiment.workers,
                        "Worker threads (default: CAUSAL_EVAL_WORKERS or 1)");
    CLI::Option* seed_opt =
        sub_exp->add_option("--seed", experiment.seed, "Master seed (overrides the config)");

    ValidateOptions validate;
    CLI::App* sub_val = app.add_subcommand("validate", "Validate data files against their contracts");
    CLI::Option* val_factorial =
        sub_val->add_option("--factorial", validate.factorial, "Factorial CSV");
    CLI::Option* val_roles = sub_val->add_option("--roles", validate.roles, "Roles sidecar JSON");
    CLI::Option* val_summary =
        sub_val->add_option("--summary", validate.summary, "summary.json to check");
    CLI::Option* val_schema = sub_val->add_option("--schema", validate.schema, "JSON schema");
    val_factorial->needs(val_roles);
    val_roles->needs(val_factorial);
    val_summary->needs(val_schema);
    val_schema->needs(val_summary);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sub_gen->parsed())
            run_gen(gen);
        if (sub_bias->parsed())
            run_bias(bias);
        if (sub_learn->parsed())
            run_learn(learn);
        if (sub_eval->parsed())
            run_eval(eval);
        if (sub_exp->parsed()) {
            experiment.seed_given = seed_opt->count() > 0;
            run_experiment_cmd(experiment);
        }
        if (sub_val->parsed()) {
            if (validate.factorial.empty() && validate.summary.empty())
                throw ConfigError("validate needs --factorial/--roles or --summary/--schema");
            run_validate(validate);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
