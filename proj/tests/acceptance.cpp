// Release gate: one self-contained check per line, each pinned to fixed seeds
// so a pass is reproducible. Prints PASS or FAIL per check (FLAG for the
// learner-ranking check, which reports its result without blocking) and exits
// nonzero only if a check fails.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "causal/bayesnet.hpp"
#include "causal/bench.hpp"
#include "causal/graph.hpp"
#include "causal/groundtruth.hpp"
#include "causal/learners.hpp"
#include "causal/metrics.hpp"
#include "causal/obsbias.hpp"
#include "causal/rng.hpp"
#include "causal/stats.hpp"
#include "helpers.hpp"

using namespace causal;

namespace {

struct Verdict {
    bool ok = true;
    bool flag = false;
    std::string detail;
};

std::string strf(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ExperimentConfig config_from(const std::string& json_text) {
    return ExperimentConfig::from_json(nlohmann::json::parse(json_text));
}

// Exact queries and interventions on 200 small binary nets, each answer
// compared against brute-force enumeration of the joint.
Verdict check_inference() {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(501);
    double worst = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
        const int n = 2 + rep % 5;
        const Dag g = random_dag(n, std::min(2.0, n - 1.0), 50000 + rep);
        const DiscreteBayesNet net = dirichlet_parameterize(g, 2, 1.0, 51000 + rep);

        for (int probe = 0; probe < 2; ++probe) {
            const int target = static_cast<int>(rng.uniform_int(n));
            std::map<int, int> evidence_idx;
            std::map<std::string, std::string> evidence;
            for (int v = 0; v < n; ++v) {
                if (v == target || !rng.bernoulli(0.4))
                    continue;
                const int value = static_cast<int>(rng.uniform_int(net.cardinality(v)));
                evidence_idx[v] = value;
                evidence[g.name(v)] = net.labels(v)[value];
            }
            const auto got = query(net, g.name(target), evidence);
            const auto ref = testref::enum_conditional(net, target, evidence_idx);
            double total = 0.0;
            for (double m : ref)
                total += m;
            for (std::size_t k = 0; k < ref.size(); ++k)
                worst = std::max(worst, std::abs(got.probabilities[k] - ref[k] / total));
        }

        for (int probe = 0; probe < 2; ++probe) {
            const int treatment = static_cast<int>(rng.uniform_int(n));
            int outcome = static_cast<int>(rng.uniform_int(n - 1));
            if (outcome >= treatment)
                ++outcome;
            const int value = static_cast<int>(rng.uniform_int(net.cardinality(treatment)));
            const auto got = interventional_distribution(net, g.name(outcome), g.name(treatment),
                                                         net.labels(treatment)[value]);
            const auto ref = testref::enum_interventional(net, outcome, treatment, value);
            double total = 0.0;
            for (double m : ref)
                total += m;
            for (std::size_t k = 0; k < ref.size(); ++k)
                worst = std::max(worst, std::abs(got.probabilities[k] - ref[k] / total));
        }
    }
    const double elapsed = seconds_since(start);
    Verdict v;
    v.ok = worst <= 1e-10 && elapsed <= 60.0;
    v.detail = strf("200 nets, 800 probes, max deviation %.2e", worst);
    return v;
}

// sid against the definitional parent-adjustment oracle on 500 random DAG
// pairs, plus sid(g, g) == 0 on every truth.
Verdict check_sid_oracle() {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(2024);
    int mismatches = 0, self_nonzero = 0;
    for (int rep = 0; rep < 500; ++rep) {
        const int n = 2 + static_cast<int>(rng.uniform_int(5));
        const double density = std::min(2.0, n - 1.0);
        const Dag truth = random_dag(n, density, 40000 + rep);
        const Dag learned = random_dag(n, density, 41000 + rep);
        std::vector<int> cards(n);
        for (int& c : cards)
            c = 2 + static_cast<int>(rng.uniform_int(2));
        std::vector<DiscreteBayesNet> nets;
        nets.push_back(dirichlet_parameterize(truth, cards, 1.0, 42000 + rep));
        nets.push_back(dirichlet_parameterize(truth, cards, 0.7, 43000 + rep));
        if (sid(truth, learned) != testref::numeric_sid(truth, learned, nets))
            ++mismatches;
        if (sid(truth, truth) != 0)
            ++self_nonzero;
    }
    const double elapsed = seconds_since(start);
    Verdict v;
    v.ok = mismatches == 0 && self_nonzero == 0 && elapsed <= 300.0;
    v.detail = strf("500 pairs, %d oracle mismatches, %d nonzero self-distances", mismatches,
                    self_nonzero);
    return v;
}

// The oracle constraint learner must reproduce the exact equivalence class of
// the generating DAG across a density sweep.
Verdict check_oracle_pc() {
    int wrong = 0;
    const double densities[] = {1.0, 1.5, 2.0, 2.5, 3.0};
    for (int i = 0; i < 100; ++i) {
        const Dag truth = random_dag(6, densities[i % 5], 90000 + i);
        if (!(pc_oracle(truth, LearnerConfig{}) == cpdag_of(truth)))
            ++wrong;
    }
    Verdict v;
    v.ok = wrong == 0;
    v.detail = strf("100 6-node graphs, %d class mismatches", wrong);
    return v;
}

// Metric axioms on random distribution triples, plus three pinned values that
// fix the scale: identical pairs, disjoint point masses, and a half-overlap.
Verdict check_tvd() {
    Rng rng(7001);
    int violations = 0;
    for (int rep = 0; rep < 10000; ++rep) {
        const int k = 2 + static_cast<int>(rng.uniform_int(4));
        auto draw = [&] {
            std::vector<std::string> domain;
            std::vector<double> p(k);
            double total = 0.0;
            for (int i = 0; i < k; ++i) {
                domain.push_back(std::to_string(i));
                total += p[i] = rng.gamma(1.0);
            }
            for (double& x : p)
                x /= total;
            return CategoricalDistribution::make(std::move(domain), std::move(p));
        };
        const auto p = draw(), q = draw(), r = draw();
        const double pq = tvd(p, q);
        if (std::abs(pq - tvd(q, p)) > 1e-15)
            ++violations;
        if (pq < 0.0 || pq > 1.0 + 1e-12)
            ++violations;
        if (tvd(p, p) != 0.0)
            ++violations;
        if (tvd(p, r) > pq + tvd(q, r) + 1e-12)
            ++violations;
    }
    auto two = [](double a, double b) {
        return CategoricalDistribution::make({"0", "1"}, {a, b});
    };
    const double same = tvd(two(0.3, 0.7), two(0.3, 0.7));
    const double disjoint = tvd(two(1.0, 0.0), two(0.0, 1.0));
    const double half = tvd(two(0.5, 0.5), two(1.0, 0.0));
    const bool pinned = std::abs(same) <= 1e-12 && std::abs(disjoint - 1.0) <= 1e-12 &&
                        std::abs(half - 0.5) <= 1e-12;
    Verdict v;
    v.ok = violations == 0 && pinned;
    v.detail = strf("10000 triples, %d axiom violations; pinned 0/1/0.5 %s", violations,
                    pinned ? "exact" : "WRONG");
    return v;
}

// One covariate alternating over two levels, one treatment; outcome values are
// irrelevant to the sampler's assignment mechanism.
FactorialDataset alternating_grid(int subjects) {
    std::vector<FactorialRecord> records;
    for (int s = 0; s < subjects; ++s)
        for (int mask = 0; mask < 2; ++mask) {
            FactorialRecord r;
            r.subject = "s" + std::to_string(100000 + s);
            r.trial = 0;
            r.covariates = {std::to_string(s % 2 + 1)};
            r.treatments = {mask};
            r.outcomes = {std::to_string(mask)};
            records.push_back(std::move(r));
        }
    return FactorialDataset::create({"C"}, {"T1"}, {"O1"}, records);
}

// At beta = 0 assignment is independent of the covariate, so the chi-square
// independence test must reject at its nominal rate; at beta = 2 the odd
// covariate code's treated fraction must sit at the inverse logit of -2.
Verdict check_bias_calibration() {
    const FactorialDataset small = alternating_grid(400);
    int rejections = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        const Dataset ds = logistic_bias_sample(small, 0.0, "C", 60000 + rep);
        const int c_col = ds.column_index("C"), t_col = ds.column_index("T1");
        double count[2][2] = {{0, 0}, {0, 0}};
        for (int row = 0; row < ds.num_rows(); ++row)
            count[ds.label(row, c_col) == "2"][ds.label(row, t_col) == "1"] += 1.0;
        const double n = ds.num_rows();
        double stat = 0.0;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                const double expected =
                    (count[a][0] + count[a][1]) * (count[0][b] + count[1][b]) / n;
                stat += (count[a][b] - expected) * (count[a][b] - expected) / expected;
            }
        if (chi_squared_survival(stat, 1.0) < 0.05)
            ++rejections;
    }
    const double rate = rejections / 1000.0;

    const FactorialDataset big = alternating_grid(20000);
    const Dataset biased = logistic_bias_sample(big, 2.0, "C", 61000);
    const int c_col = biased.column_index("C"), t_col = biased.column_index("T1");
    int odd_total = 0, odd_treated = 0;
    for (int row = 0; row < biased.num_rows(); ++row) {
        if (biased.label(row, c_col) != "1")
            continue;
        ++odd_total;
        odd_treated += biased.label(row, t_col) == "1";
    }
    const double treated = static_cast<double>(odd_treated) / odd_total;
    const double expected = 1.0 / (1.0 + std::exp(2.0));

    Verdict v;
    v.ok = std::abs(rate - 0.05) <= 0.02 && odd_total == 10000 &&
           std::abs(treated - expected) <= 0.01;
    v.detail = strf("null rejection rate %.3f; treated fraction %.4f vs %.4f", rate, treated,
                    expected);
    return v;
}

// On the 100-graph sweep, graph-edit distance must track intervention-based
// distance far better than it tracks interventional error.
Verdict check_correlation_split() {
    const auto start = std::chrono::steady_clock::now();
    const ExperimentConfig cfg = config_from(R"({
        "experiment": "correlation", "learners": ["ges"],
        "n_dags": 100, "n_vars": 14, "expected_neighbors": 2.0, "n_samples": 5000,
        "alpha_dirichlet": 1.0, "trials": 1, "master_seed": 2
    })");
    const MetricReport report = run_experiment(cfg, 1);
    std::vector<double> shd_vals, sid_vals, tvd_vals;
    for (const MetricRow& row : report.rows) {
        if (row.status != "ok" && row.status != "extension_forced")
            continue;
        shd_vals.push_back(row.shd);
        sid_vals.push_back(row.sid);
        tvd_vals.push_back(row.tvd_mean);
    }
    const double rho_sid = spearman(shd_vals, sid_vals);
    const double rho_tvd = spearman(shd_vals, tvd_vals);
    const double elapsed = seconds_since(start);
    Verdict v;
    v.ok = shd_vals.size() == 100 && rho_sid >= 0.6 && rho_tvd < rho_sid - 0.2 &&
           elapsed <= 1800.0;
    v.detail = strf("rho(shd,sid)=%.3f rho(shd,tvd)=%.3f over %zu cells", rho_sid, rho_tvd,
                    shd_vals.size());
    return v;
}

// Adding spurious edges must never register as intervention-based distance,
// while removing true effect edges must dominate the summed interventional
// error.
Verdict check_specification_error() {
    const ExperimentConfig cfg = config_from(R"({
        "experiment": "spec_error", "trials": 20, "master_seed": 7,
        "bins": 3, "alpha_effects": 0.05,
        "fixture": {"subjects": 300, "treatments": 2, "outcomes": 4, "trials": 1}
    })");
    const MetricReport report = run_experiment(cfg, 1);
    int bad_status = 0, over_sid_nonzero = 0;
    std::vector<double> over_sum, under_sum;
    for (const MetricRow& row : report.rows) {
        if (row.status != "ok") {
            ++bad_status;
            continue;
        }
        if (row.algorithm == "overspecify") {
            if (row.sid != 0.0)
                ++over_sid_nonzero;
            over_sum.push_back(row.tvd_sum);
        } else {
            under_sum.push_back(row.tvd_sum);
        }
    }
    const double over_median = median(over_sum);
    const double under_median = median(under_sum);
    Verdict v;
    v.ok = bad_status == 0 && over_sid_nonzero == 0 && !over_sum.empty() &&
           under_median >= 2.0 * over_median;
    v.detail = strf("overspec sid=0 in %zu/%zu cells; median tvd_sum %.3f vs %.3f",
                    over_sum.size() - over_sid_nonzero, over_sum.size(), under_median,
                    over_median);
    return v;
}

// The score-based learner is expected to lead both constraint-based learners
// on summed interventional error. A violation is reported, with the
// hyperparameters that produced it, without failing the gate.
Verdict check_learner_ranking() {
    const ExperimentConfig cfg = config_from(R"({
        "experiment": "algo_compare",
        "n_dags": 30, "n_vars": 14, "expected_neighbors": 2.0, "n_samples": 5000,
        "alpha_dirichlet": 1.0, "trials": 1, "master_seed": 31
    })");
    const MetricReport report = run_experiment(cfg, 1);
    std::map<std::string, std::vector<double>> sums;
    for (const MetricRow& row : report.rows)
        if (row.status == "ok" || row.status == "extension_forced")
            sums[row.algorithm].push_back(row.tvd_sum);
    const double ges = median(sums.at("ges"));
    const double pc = median(sums.at("pc"));
    const double mmhc = median(sums.at("mmhc"));
    Verdict v;
    v.flag = !(ges <= pc && ges <= mmhc);
    v.detail = strf("median tvd_sum ges=%.3f pc=%.3f mmhc=%.3f", ges, pc, mmhc);
    if (v.flag)
        for (const std::string& note : report.notes)
            v.detail += "; " + note;
    return v;
}

// The same configuration run with 1 and 8 workers must emit byte-identical
// rows and summaries, and the summary must satisfy the published schema.
Verdict check_worker_determinism(const std::string& schema_path) {
    namespace fs = std::filesystem;
    const std::string base = "acceptance_out";
    fs::remove_all(base);
    const char* empirical = R"({
        "experiment": "empirical_pipeline", "learners": ["pc", "ges"],
        "trials": 2, "beta": 2.0, "bins": 3, "master_seed": 11,
        "fixture": {"subjects": 200, "treatments": 2, "outcomes": 4, "trials": 1}
    })";
    const char* correlation = R"({
        "experiment": "correlation", "learners": ["ges", "pc"],
        "n_dags": 4, "n_vars": 8, "expected_neighbors": 2.0, "n_samples": 800,
        "trials": 1, "master_seed": 3
    })";
    int mismatched_files = 0;
    for (const char* text : {empirical, correlation}) {
        const ExperimentConfig cfg = config_from(text);
        const std::string one = base + "/" + experiment_name(cfg.experiment) + "_w1";
        const std::string eight = base + "/" + experiment_name(cfg.experiment) + "_w8";
        emit_report(run_experiment(cfg, 1), one);
        emit_report(run_experiment(cfg, 8), eight);
        for (const char* file : {"rows.csv", "summary.json"})
            if (slurp(one + "/" + std::string(file)) != slurp(eight + "/" + std::string(file)))
                ++mismatched_files;
    }
    const auto schema = nlohmann::json::parse(slurp(schema_path));
    const auto summary =
        nlohmann::json::parse(slurp(base + "/empirical_pipeline_w1/summary.json"));
    const auto violations = validate_schema(summary, schema);
    Verdict v;
    v.ok = mismatched_files == 0 && violations.empty();
    v.detail = strf("2 experiments, %d file mismatches, %zu schema violations",
                    mismatched_files, violations.size());
    for (const std::string& violation : violations)
        v.detail += "; " + violation;
    return v;
}

// Blocked rank statistic on the worked example: twenty blocks, the treated arm
// strictly larger in each, so the statistic and its chi-square tail are known
// in closed form.
Verdict check_rank_statistic() {
    std::vector<FactorialRecord> records;
    for (int s = 0; s < 20; ++s)
        for (int mask = 0; mask < 2; ++mask) {
            FactorialRecord r;
            r.subject = "s" + std::to_string(1000 + s);
            r.trial = 0;
            r.covariates = {std::to_string(s % 3 + 1)};
            r.treatments = {mask};
            r.outcomes = {std::to_string(10.0 + s + (mask ? 5.0 : 0.0))};
            records.push_back(std::move(r));
        }
    const FactorialDataset d = FactorialDataset::create({"C"}, {"T1"}, {"O1"}, records);
    const auto [q, p] = friedman_test(d, "T1", "O1");
    const double reference = std::erfc(std::sqrt(10.0));
    Verdict v;
    v.ok = std::abs(q - 20.0) <= 1e-9 && std::abs(p - reference) <= 1e-7 * reference;
    v.detail = strf("Q=%.10g p=%.6e reference=%.6e", q, p, reference);
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    std::string schema_path = "schemas/summary.schema.json";
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--schema")
            schema_path = argv[i + 1];

    struct Check {
        int id;
        const char* label;
        std::function<Verdict()> run;
    };
    const std::vector<Check> checks = {
        {1, "exact queries and interventions match enumeration", check_inference},
        {2, "sid equals the definitional adjustment oracle", check_sid_oracle},
        {3, "oracle pc recovers the exact equivalence class", check_oracle_pc},
        {4, "tvd metric axioms and pinned values", check_tvd},
        {5, "selection bias calibration at beta 0 and 2", check_bias_calibration},
        {6, "shd tracks sid but not interventional error", check_correlation_split},
        {7, "overspec invisible to sid, underspec dominates tvd", check_specification_error},
        {8, "ges leads pc and mmhc on interventional error", check_learner_ranking},
        {9, "reports byte-identical across worker counts",
         [&schema_path] { return check_worker_determinism(schema_path); }},
        {10, "friedman statistic pinned on the consistent shift", check_rank_statistic},
    };

    int failed = 0, flagged = 0;
    for (const Check& check : checks) {
        const auto start = std::chrono::steady_clock::now();
        Verdict verdict;
        try {
            verdict = check.run();
        } catch (const std::exception& e) {
            verdict.ok = false;
            verdict.detail = std::string("exception: ") + e.what();
        }
        const char* tag = verdict.ok ? (verdict.flag ? "FLAG" : "PASS") : "FAIL";
        std::printf("%-4s %2d  %-52s  %s  [%.1fs]\n", tag, check.id, check.label,
                    verdict.detail.c_str(), seconds_since(start));
        std::fflush(stdout);
        failed += !verdict.ok;
        flagged += verdict.ok && verdict.flag;
    }
    std::printf("acceptance: %zu/%zu passed%s\n", checks.size() - failed, checks.size(),
                flagged ? strf(", %d flagged", flagged).c_str() : "");
    return failed == 0 ? 0 : 1;
}
