#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "causal/errors.hpp"
#include "causal/graph.hpp"

namespace causal {

// Categorical table. Cells are stored as indices into per-column label domains;
// the string labels only appear at the CSV boundary. Column-major storage keeps
// the counting loops in the scorers cache-friendly.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::vector<std::string> columns, std::vector<std::vector<std::string>> domains);

    int num_rows() const { return rows_; }
    int num_columns() const { return static_cast<int>(columns_.size()); }
    const std::vector<std::string>& columns() const { return columns_; }
    const std::string& column_name(int c) const { return columns_.at(c); }
    bool has_column(const std::string& name) const { return index_.count(name) > 0; }
    int column_index(const std::string& name) const;

    const std::vector<std::string>& domain(int c) const { return domains_.at(c); }
    int cardinality(int c) const { return static_cast<int>(domains_.at(c).size()); }
    int label_index(int c, const std::string& label) const;  // IdentifierError

    int value(int row, int c) const { return values_.at(c).at(row); }
    const std::string& label(int row, int c) const { return domains_[c][value(row, c)]; }
    const std::vector<int>& column_values(int c) const { return values_.at(c); }

    void add_row(const std::vector<int>& values);
    void add_row_labels(const std::vector<std::string>& labels);

    Dataset select_columns(const std::vector<std::string>& names) const;

    void write_csv(std::ostream& out) const;
    // Header row names the columns; domains are the sorted distinct values seen.
    static Dataset read_csv(std::istream& in);

private:
    std::vector<std::string> columns_;
    std::unordered_map<std::string, int> index_;
    std::vector<std::vector<std::string>> domains_;
    std::vector<std::unordered_map<std::string, int>> domain_index_;
    std::vector<std::vector<int>> values_;  // [column][row]
    int rows_ = 0;
};

struct CategoricalDistribution {
    std::vector<std::string> domain;
    std::vector<double> probabilities;

    // Validates matching lengths, nonnegativity, and unit total (1e-9).
    static CategoricalDistribution make(std::vector<std::string> domain,
                                        std::vector<double> probabilities);
};

// Bayesian network over categorical variables. Each node carries a label domain
// (cardinality >= 2) and a CPT with one row per parent configuration; parents are
// ordered lexicographically by name and the last parent varies fastest across
// rows, which fixes the on-disk row order.
class DiscreteBayesNet {
public:
    DiscreteBayesNet() = default;
    DiscreteBayesNet(Dag dag, std::vector<std::vector<std::string>> labels);

    const Dag& dag() const { return dag_; }
    int num_variables() const { return dag_.num_variables(); }
    int cardinality(int v) const { return static_cast<int>(labels_.at(v).size()); }
    const std::vector<std::string>& labels(int v) const { return labels_.at(v); }
    int label_index(int v, const std::string& label) const;

    const std::vector<int>& cpt_parents(int v) const { return cpt_parents_.at(v); }
    int cpt_row_count(int v) const;
    // Row for a full assignment (indexed by variable, only parent slots read).
    int cpt_row_index(int v, const std::vector<int>& assignment) const;
    const std::vector<std::vector<double>>& cpt(int v) const { return cpts_.at(v); }
    void set_cpt(int v, std::vector<std::vector<double>> rows);
    bool has_cpt(int v) const { return !cpts_.at(v).empty(); }

    nlohmann::json to_json() const;
    static DiscreteBayesNet from_json(const nlohmann::json& j);

private:
    Dag dag_;
    std::vector<std::vector<std::string>> labels_;
    std::vector<std::unordered_map<std::string, int>> label_index_;
    std::vector<std::vector<int>> cpt_parents_;
    std::vector<std::vector<std::vector<double>>> cpts_;
};

// Independent symmetric-Dirichlet(alpha) draw for every CPT row.
DiscreteBayesNet dirichlet_parameterize(const Dag& g, const std::vector<int>& cardinalities,
                                        double alpha, std::uint64_t seed);
DiscreteBayesNet dirichlet_parameterize(const Dag& g, int cardinality, double alpha,
                                        std::uint64_t seed);

// Ancestral sampling; columns in variable declaration order.
Dataset forward_sample(const DiscreteBayesNet& net, int n, std::uint64_t seed);

// Graph surgery: assigned nodes lose their parents and become point masses.
DiscreteBayesNet intervene(const DiscreteBayesNet& net,
                           const std::map<std::string, std::string>& assignments);

// Exact conditional P(target | evidence) by variable elimination (min-degree
// order). Throws ZeroProbabilityEvidenceError when the evidence has mass zero.
CategoricalDistribution query(const DiscreteBayesNet& net, const std::string& target,
                              const std::map<std::string, std::string>& evidence);

// P(outcome | do(treatment = value)): surgery followed by a marginal query.
CategoricalDistribution interventional_distribution(const DiscreteBayesNet& net,
                                                    const std::string& outcome,
                                                    const std::string& treatment,
                                                    const std::string& value);

// Maximum likelihood CPTs with additive smoothing. smoothing = 0 raises
// UndefinedRowError on parent configurations absent from the data.
DiscreteBayesNet fit_parameters(const Dag& g, const Dataset& data, double smoothing);

}  // namespace causal
