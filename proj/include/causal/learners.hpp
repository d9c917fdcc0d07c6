#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "causal/bayesnet.hpp"
#include "causal/graph.hpp"

namespace causal {

struct CiDecision {
    double statistic = 0.0;
    double p_value = 1.0;
    int degrees_of_freedom = 0;
    bool independent = true;
    bool low_power = false;  // sample too small for the cell count to trust the test
};

struct LearnerConfig {
    double alpha = 0.05;              // CI-test significance level
    double ess = 10.0;                // equivalent sample size for the Bayesian score
    std::optional<int> max_cond_set;  // conditioning-set cap; adaptive default
};

// Likelihood-ratio independence test of x and y given z. Degrees of freedom are
// (|X|-1)(|Y|-1) times the number of nonempty strata of z; the decision flags
// low power when n < 10 * df.
CiDecision g2_test(const Dataset& data, const std::string& x, const std::string& y,
                   const std::vector<std::string>& z, double alpha);

// Decomposable Dirichlet-multinomial network score (higher is better).
// Score-equivalent: DAGs in one Markov equivalence class tie exactly.
double bdeu_score(const Dataset& data, const Dag& g, double ess);

// Abstract conditional-independence source so constraint-based search runs
// identically on data (G2) and on a ground-truth graph (d-separation).
class IndependenceOracle {
public:
    virtual ~IndependenceOracle() = default;
    virtual CiDecision test(int x, int y, const std::vector<int>& z) const = 0;
    virtual const std::vector<std::string>& variable_names() const = 0;
    int num_variables() const { return static_cast<int>(variable_names().size()); }
};

class G2Oracle final : public IndependenceOracle {
public:
    G2Oracle(const Dataset& data, double alpha) : data_(&data), alpha_(alpha) {}
    CiDecision test(int x, int y, const std::vector<int>& z) const override;
    const std::vector<std::string>& variable_names() const override {
        return data_->columns();
    }

private:
    const Dataset* data_;
    double alpha_;
};

class DSeparationOracle final : public IndependenceOracle {
public:
    explicit DSeparationOracle(const Dag& g) : dag_(&g) {}
    CiDecision test(int x, int y, const std::vector<int>& z) const override;
    const std::vector<std::string>& variable_names() const override {
        return dag_->variables();
    }

private:
    const Dag* dag_;
};

// Constraint-based search: stable skeleton phase, recorded separating sets,
// collider orientation, orientation closure.
Pdag pc(const IndependenceOracle& oracle, const LearnerConfig& config);
Pdag pc(const Dataset& data, const LearnerConfig& config);
Pdag pc_oracle(const Dag& truth, const LearnerConfig& config);

// Two-phase greedy equivalence-class search under the Bayesian score.
Pdag ges(const Dataset& data, const LearnerConfig& config);

// Constraint-screened hill climb: per-variable candidate-parent discovery
// (max-min association), then greedy add/delete/reverse restricted to the
// discovered skeleton. Returns a DAG, not a class.
Dag mmhc(const Dataset& data, const LearnerConfig& config);

// The conditioning-set cap actually used by the constraint-based learners:
// explicit config value if present, otherwise unbounded for small problems
// (<= 15 variables) and 3 beyond that.
int effective_max_cond_set(const LearnerConfig& config, int n_vars);

}  // namespace causal
