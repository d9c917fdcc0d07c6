#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "causal/bayesnet.hpp"
#include "causal/learners.hpp"
#include "causal/obsbias.hpp"

namespace causal {

enum class LearnerKind { pc, ges, mmhc };

LearnerKind learner_kind_from_name(const std::string& name);  // ConfigError
const char* learner_name(LearnerKind kind);

// Runs the named structure learner and returns its class representation.
// mmhc's DAG output is completed to its class.
Pdag run_learner(LearnerKind kind, const Dataset& data, const LearnerConfig& config);

// Random-structure benchmark inputs: for each index, a random DAG, a
// Dirichlet-drawn parameterization over binary variables, and a forward
// sample. All randomness derives from (seed, index), so any prefix of the
// list is reproducible independently of the rest.
std::vector<std::pair<DiscreteBayesNet, Dataset>> synthetic_benchmark(
    int n_dags, int n_vars, double expected_neighbors, int n_samples,
    double alpha_dirichlet, std::uint64_t seed);

// Learns a model from empirical-style data, fits its parameters on that same
// data, then forward-samples a synthetic dataset from the fitted model. The
// fitted net is the known ground truth for the synthetic data.
std::pair<DiscreteBayesNet, Dataset> synthetic_from_empirical(const Dataset& data,
                                                              LearnerKind learner,
                                                              const LearnerConfig& config,
                                                              int n_samples,
                                                              std::uint64_t seed);

enum class AlterMode { overspecify, underspecify };

// Mis-specifies a treatment's outgoing structure: overspecify points the
// treatment at every listed outcome, underspecify removes all its outgoing
// edges. Every node whose parent set changed is refitted on `data`.
DiscreteBayesNet alter_model(const DiscreteBayesNet& net, const std::string& treatment,
                             const std::vector<std::string>& outcomes, AlterMode mode,
                             const Dataset& data, double smoothing = 1.0);

// Three-layer factorial fixture: a biasing covariate over the subjects,
// binary treatments, and continuous outcomes where each non-null outcome is
// scaled by `multiplier` under exactly one treatment. The last quarter of the
// outcomes are null (treatment-independent), subject effects and measurement
// noise are lognormal, and the built-in effect strength keeps every true
// effect's interventional shift well above noise.
struct FixtureParams {
    int subjects = 300;
    int treatments = 2;
    int outcomes = 4;
    int trials = 1;
    int covariate_levels = 2;
    double multiplier = 2.0;
    double subject_sigma = 0.3;
    double noise_sigma = 0.15;
};

struct FactorialFixture {
    FactorialDataset data;
    // (treatment name, outcome name) pairs that truly carry an effect.
    std::vector<std::pair<std::string, std::string>> true_effects;
};

FactorialFixture synthesize_factorial_fixture(const FixtureParams& params,
                                              std::uint64_t seed);

}  // namespace causal
