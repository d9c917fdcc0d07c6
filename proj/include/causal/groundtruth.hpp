#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "causal/bayesnet.hpp"
#include "causal/graph.hpp"
#include "causal/obsbias.hpp"

namespace causal {

// Which treatment-outcome pairs the interventional data itself declares
// causally related, with the test evidence behind each decision.
struct EffectLedger {
    struct Entry {
        std::string treatment;
        std::string outcome;
        double statistic = 0.0;
        double p_value = 1.0;
        bool causally_related = false;
    };
    std::vector<Entry> entries;

    // CSV with header treatment, outcome, statistic, p_value, causally_related.
    void write_csv(std::ostream& out) const;
};

// Friedman test for a blocked difference across the treatment's arms, with
// subjects as blocks. Outcomes are averaged per (subject, arm) over trials and
// the other treatments' assignments, mid-ranked within each block, and the
// statistic is tie-corrected; the p-value is the chi-square tail at k-1
// degrees of freedom. Fully tied data yields (0, 1).
std::pair<double, double> friedman_test(const FactorialDataset& data,
                                        const std::string& treatment,
                                        const std::string& outcome);

// DAG consistent with the factorial evidence: biasing_covariate -> every
// treatment (the selection mechanism), and treatment -> outcome for every
// Friedman-significant pair at level alpha. Parent adjustment for any
// treatment is valid by construction because the covariate is its only parent.
std::pair<Dag, EffectLedger> consistent_dag(const FactorialDataset& data,
                                            const std::string& biasing_covariate,
                                            double alpha);

// P(outcome | do(treatment = t)) read directly off the factorial grid: the
// relative frequency of each outcome category among records with the
// treatment at t, uniform over subjects, trials, and the other treatments.
CategoricalDistribution empirical_do_distribution(const FactorialDataset& data,
                                                  const std::string& outcome,
                                                  const std::string& treatment, int t);

}  // namespace causal
