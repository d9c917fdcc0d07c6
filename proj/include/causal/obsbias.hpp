#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "causal/bayesnet.hpp"

namespace causal {

// One measured cell of a factorial experiment: a subject, a full treatment
// assignment, a trial index, and the observed outcome values.
struct FactorialRecord {
    std::string subject;
    int trial = 0;
    std::vector<std::string> covariates;
    std::vector<int> treatments;  // one 0/1 value per treatment, in order
    std::vector<std::string> outcomes;
};

// Interventional dataset from a full factorial experiment: every subject is
// measured under every combination of binary treatments, for every trial
// index. Covariates are per-subject constants. Construction validates the
// complete grid, rejects duplicate (subject, assignment, trial) keys, and
// keeps subjects in first-appearance order.
class FactorialDataset {
public:
    static FactorialDataset create(std::vector<std::string> covariate_names,
                                   std::vector<std::string> treatment_names,
                                   std::vector<std::string> outcome_names,
                                   const std::vector<FactorialRecord>& records);

    // CSV with header subject_id, trial, covariates, treatments, outcomes, plus
    // a JSON sidecar mapping every data column to its role and domain. Writing
    // is canonical (subjects in stored order, trials then assignments
    // ascending), so write -> load -> write is byte-identical.
    static FactorialDataset load(const std::string& csv_path, const std::string& roles_path);
    void save(const std::string& csv_path, const std::string& roles_path) const;

    const std::vector<std::string>& covariate_names() const { return covariate_names_; }
    const std::vector<std::string>& treatment_names() const { return treatment_names_; }
    const std::vector<std::string>& outcome_names() const { return outcome_names_; }
    const std::vector<std::string>& subjects() const { return subjects_; }
    const std::vector<int>& trials() const { return trials_; }

    int num_subjects() const { return static_cast<int>(subjects_.size()); }
    int num_treatments() const { return static_cast<int>(treatment_names_.size()); }
    int num_assignments() const { return 1 << num_treatments(); }
    int num_trials() const { return static_cast<int>(trials_.size()); }
    int num_cells() const { return num_subjects() * num_assignments() * num_trials(); }

    const std::string& covariate_value(int subject, int covariate) const;
    // Assignment masks put treatment position p at bit p.
    static int treatment_bit(int mask, int position) { return (mask >> position) & 1; }
    const std::vector<std::string>& outcomes_at(int subject, int mask, int trial_slot) const;

    // Sorted distinct values of a covariate or outcome column across the grid.
    const std::vector<std::string>& covariate_domain(int covariate) const;
    const std::vector<std::string>& outcome_domain(int outcome) const;

private:
    std::vector<std::string> covariate_names_;
    std::vector<std::string> treatment_names_;
    std::vector<std::string> outcome_names_;
    std::vector<std::string> subjects_;
    std::vector<std::vector<std::string>> covariate_values_;  // [subject][covariate]
    std::vector<int> trials_;                                 // sorted distinct
    std::vector<std::vector<std::string>> cells_;  // [(subject * A + mask) * T + slot]
    std::vector<std::vector<std::string>> covariate_domains_;
    std::vector<std::vector<std::string>> outcome_domains_;

    int cell_index(int subject, int mask, int trial_slot) const;
    void rebuild_domains();
};

// Maps the covariate's distinct values to integer codes 1..l, ordering
// numerically when every value parses as a number and lexically otherwise.
std::vector<int> covariate_codes(const FactorialDataset& data, const std::string& covariate);

// The complete grid flattened to a plain dataset: one row per
// (subject, assignment, trial), columns covariates then treatments (as 0/1
// labels) then outcomes. This is the unbiased view the consistent model is
// fitted on.
Dataset to_dataset(const FactorialDataset& data);

enum class BiasMode { single_draw, all_trials };

// Observational sampling by covariate-driven logistic treatment selection.
// For subject e with covariate code C_e and treatment index j (1-based),
// the sign s_ej is +1 when C_e * j is even and -1 otherwise; each treatment
// is drawn Bernoulli(logit^-1(s_ej * beta)) and the subject's measured
// factorial cell for the drawn assignment is emitted. single_draw emits one
// record per subject from a uniformly chosen trial; all_trials emits one per
// trial. Covariate columns are carried into the output.
Dataset logistic_bias_sample(const FactorialDataset& data, double beta,
                             const std::string& covariate, std::uint64_t seed,
                             BiasMode mode = BiasMode::single_draw);

// Baseline normalization and equal-frequency discretization: numeric outcomes
// are divided by their median over the control assignment's records, then cut
// into `bins` equal-frequency categories with boundaries computed once over
// the full column. Numeric covariates with more distinct values than bins are
// cut the same way (without normalization). Columns that end up constant
// produce a single category and a warning.
FactorialDataset prepare_dataset(const FactorialDataset& data, int bins,
                                 const std::vector<int>& control_assignment = {},
                                 std::vector<std::string>* warnings = nullptr);

}  // namespace causal
