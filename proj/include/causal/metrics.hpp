#pragma once

#include <string>
#include <utility>
#include <vector>

#include "causal/bayesnet.hpp"
#include "causal/graph.hpp"

namespace causal {

// One evaluated causal effect: the shift that do(treatment = value) induces on
// an outcome, measured as total variation against a reference model.
struct EffectEntry {
    std::string treatment;
    std::string value;
    std::string outcome;
    double tvd = 0.0;
};

struct EffectTable {
    std::vector<EffectEntry> entries;
};

enum class AggregateMode { mean, sum };

// 1/2 * sum |p_i - q_i|. Domains must match label-for-label.
double tvd(const CategoricalDistribution& p, const CategoricalDistribution& q);

// Mean or sum of the table's tvd column. Empty tables are a ParameterError.
double aggregate_effects(const EffectTable& table, AggregateMode mode);

// Structural Hamming distance between two graphs compared as CPDAGs: each
// endpoint pair whose status (none / undirected / -> / <-) differs costs 1.
// Pdag arguments are taken as already-completed class representations.
int shd(const Pdag& a, const Pdag& b);
int shd(const Dag& a, const Dag& b);
int shd(const Dag& a, const Pdag& b);
int shd(const Pdag& a, const Dag& b);

// Structural intervention distance: the number of ordered pairs (i, j) whose
// interventional distribution p(j | do(i)) is not recovered by adjusting for
// i's parents in `learned`, judged against `true_g` by the adjustment
// criterion (d-separation in the proper back-door graph plus the forbidden-
// descendant test).
int sid(const Dag& true_g, const Dag& learned);

// Min and max sid over every DAG in the class of `learned` — exhaustive, so
// only sensible for small graphs.
std::pair<int, int> sid_bounds(const Dag& true_g, const Pdag& learned);

// Canonical form of a learner output: a DAG extension plus its completed
// class. `extension_forced` marks outputs that were not consistently
// extendable and went through the forced fallback.
struct NormalizedLearned {
    Dag dag;
    Pdag cpdag;
    bool extension_forced = false;
};

NormalizedLearned normalize_learned(const Pdag& learned);

}  // namespace causal
