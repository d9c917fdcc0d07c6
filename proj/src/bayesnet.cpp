#include "causal/bayesnet.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>

#include "causal/csv.hpp"
#include "causal/rng.hpp"

namespace causal {

// ---------------------------------------------------------------------------
// Dataset

Dataset::Dataset(std::vector<std::string> columns, std::vector<std::vector<std::string>> domains)
    : columns_(std::move(columns)), domains_(std::move(domains)) {
    if (columns_.size() != domains_.size())
        throw ParameterError("dataset: one domain per column required");
    for (std::size_t c = 0; c < columns_.size(); ++c) {
        if (columns_[c].empty())
            throw ParameterError("dataset: empty column name");
        if (!index_.emplace(columns_[c], static_cast<int>(c)).second)
            throw ParameterError("dataset: duplicate column '" + columns_[c] + "'");
        std::unordered_map<std::string, int> lookup;
        for (std::size_t i = 0; i < domains_[c].size(); ++i)
            if (!lookup.emplace(domains_[c][i], static_cast<int>(i)).second)
                throw ParameterError("dataset: duplicate label '" + domains_[c][i] +
                                     "' in column '" + columns_[c] + "'");
        domain_index_.push_back(std::move(lookup));
    }
    values_.resize(columns_.size());
}

int Dataset::column_index(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end())
        throw IdentifierError("dataset: unknown column '" + name + "'");
    return it->second;
}

int Dataset::label_index(int c, const std::string& label) const {
    const auto& lookup = domain_index_.at(c);
    auto it = lookup.find(label);
    if (it == lookup.end())
        throw IdentifierError("dataset: label '" + label + "' not in domain of column '" +
                              columns_[c] + "'");
    return it->second;
}

void Dataset::add_row(const std::vector<int>& values) {
    if (static_cast<int>(values.size()) != num_columns())
        throw ParameterError("dataset: row width mismatch");
    for (int c = 0; c < num_columns(); ++c)
        if (values[c] < 0 || values[c] >= cardinality(c))
            throw ParameterError("dataset: value out of domain in column '" + columns_[c] + "'");
    for (int c = 0; c < num_columns(); ++c)
        values_[c].push_back(values[c]);
    ++rows_;
}

void Dataset::add_row_labels(const std::vector<std::string>& labels) {
    if (static_cast<int>(labels.size()) != num_columns())
        throw ParameterError("dataset: row width mismatch");
    std::vector<int> values(labels.size());
    for (int c = 0; c < num_columns(); ++c)
        values[c] = label_index(c, labels[c]);
    add_row(values);
}

Dataset Dataset::select_columns(const std::vector<std::string>& names) const {
    std::vector<std::vector<std::string>> domains;
    std::vector<int> sources;
    for (const auto& name : names) {
        const int c = column_index(name);
        sources.push_back(c);
        domains.push_back(domains_[c]);
    }
    Dataset out(names, std::move(domains));
    for (std::size_t i = 0; i < sources.size(); ++i)
        out.values_[i] = values_[sources[i]];
    out.rows_ = rows_;
    return out;
}

void Dataset::write_csv(std::ostream& out) const {
    write_csv_row(out, columns_);
    std::vector<std::string> row(columns_.size());
    for (int r = 0; r < rows_; ++r) {
        for (int c = 0; c < num_columns(); ++c)
            row[c] = label(r, c);
        write_csv_row(out, row);
    }
}

Dataset Dataset::read_csv(std::istream& in) {
    const auto table = read_csv_table(in);
    if (table.empty())
        throw DataError("dataset csv: missing header row");
    const auto& header = table.front();
    const std::size_t width = header.size();

    std::vector<std::vector<std::string>> domains(width);
    for (std::size_t c = 0; c < width; ++c) {
        std::vector<std::string> distinct;
        for (std::size_t r = 1; r < table.size(); ++r) {
            if (table[r][c].empty())
                throw DataError("dataset csv: empty cell in column '" + header[c] + "'");
            distinct.push_back(table[r][c]);
        }
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        domains[c] = std::move(distinct);
    }
    try {
        Dataset out(header, std::move(domains));
        for (std::size_t r = 1; r < table.size(); ++r)
            out.add_row_labels(table[r]);
        return out;
    } catch (const ParameterError& e) {
        throw DataError(std::string("dataset csv: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// CategoricalDistribution

CategoricalDistribution CategoricalDistribution::make(std::vector<std::string> domain,
                                                      std::vector<double> probabilities) {
    if (domain.size() != probabilities.size())
        throw ParameterError("distribution: domain/probability length mismatch");
    if (domain.empty())
        throw ParameterError("distribution: empty domain");
    double total = 0.0;
    for (double p : probabilities) {
        if (p < 0.0)
            throw ParameterError("distribution: negative probability");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw ParameterError("distribution: probabilities sum to " + std::to_string(total));
    return CategoricalDistribution{std::move(domain), std::move(probabilities)};
}

// ---------------------------------------------------------------------------
// DiscreteBayesNet

DiscreteBayesNet::DiscreteBayesNet(Dag dag, std::vector<std::vector<std::string>> labels)
    : dag_(std::move(dag)), labels_(std::move(labels)) {
    if (static_cast<int>(labels_.size()) != dag_.num_variables())
        throw ParameterError("net: one label set per variable required");
    for (int v = 0; v < dag_.num_variables(); ++v) {
        if (labels_[v].size() < 2)
            throw ParameterError("net: variable '" + dag_.name(v) +
                                 "' needs at least two categories");
        std::unordered_map<std::string, int> lookup;
        for (std::size_t i = 0; i < labels_[v].size(); ++i)
            if (!lookup.emplace(labels_[v][i], static_cast<int>(i)).second)
                throw ParameterError("net: duplicate label '" + labels_[v][i] + "' on '" +
                                     dag_.name(v) + "'");
        label_index_.push_back(std::move(lookup));
    }
    cpt_parents_.resize(dag_.num_variables());
    for (int v = 0; v < dag_.num_variables(); ++v) {
        std::vector<int> pas(dag_.parents(v).begin(), dag_.parents(v).end());
        std::sort(pas.begin(), pas.end(),
                  [&](int a, int b) { return dag_.name(a) < dag_.name(b); });
        cpt_parents_[v] = std::move(pas);
    }
    cpts_.resize(dag_.num_variables());
}

int DiscreteBayesNet::label_index(int v, const std::string& label) const {
    const auto& lookup = label_index_.at(v);
    auto it = lookup.find(label);
    if (it == lookup.end())
        throw IdentifierError("net: label '" + label + "' not in domain of '" + dag_.name(v) +
                              "'");
    return it->second;
}

int DiscreteBayesNet::cpt_row_count(int v) const {
    long long q = 1;
    for (int p : cpt_parents_.at(v)) {
        q *= cardinality(p);
        if (q > (1LL << 30))
            throw ParameterError("net: parent configuration space too large on '" + dag_.name(v) +
                                 "'");
    }
    return static_cast<int>(q);
}

int DiscreteBayesNet::cpt_row_index(int v, const std::vector<int>& assignment) const {
    int row = 0;
    for (int p : cpt_parents_.at(v))
        row = row * cardinality(p) + assignment.at(p);
    return row;
}

void DiscreteBayesNet::set_cpt(int v, std::vector<std::vector<double>> rows) {
    const int q = cpt_row_count(v);
    const int r = cardinality(v);
    if (static_cast<int>(rows.size()) != q)
        throw ParameterError("net: expected " + std::to_string(q) + " cpt rows on '" +
                             dag_.name(v) + "', got " + std::to_string(rows.size()));
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != r)
            throw ParameterError("net: cpt row width mismatch on '" + dag_.name(v) + "'");
        double total = 0.0;
        for (double p : row) {
            if (p < 0.0 || !std::isfinite(p))
                throw ParameterError("net: invalid cpt entry on '" + dag_.name(v) + "'");
            total += p;
        }
        if (std::abs(total - 1.0) > 1e-9)
            throw ParameterError("net: cpt row on '" + dag_.name(v) + "' sums to " +
                                 std::to_string(total));
    }
    cpts_.at(v) = std::move(rows);
}

nlohmann::json DiscreteBayesNet::to_json() const {
    nlohmann::json j = dag_.to_json();
    nlohmann::json nodes = nlohmann::json::object();
    for (int v = 0; v < num_variables(); ++v) {
        nlohmann::json node;
        node["cardinality"] = cardinality(v);
        node["labels"] = labels_[v];
        node["cpt"] = cpts_[v];
        nodes[dag_.name(v)] = std::move(node);
    }
    j["nodes"] = std::move(nodes);
    return j;
}

DiscreteBayesNet DiscreteBayesNet::from_json(const nlohmann::json& j) {
    Dag g = Dag::from_json(j);
    if (!j.contains("nodes") || !j["nodes"].is_object())
        throw DataError("net json: missing 'nodes' object");
    try {
        std::vector<std::vector<std::string>> labels(g.num_variables());
        for (int v = 0; v < g.num_variables(); ++v) {
            const auto& name = g.name(v);
            if (!j["nodes"].contains(name))
                throw DataError("net json: no node entry for '" + name + "'");
            const auto& node = j["nodes"][name];
            labels[v] = node.at("labels").get<std::vector<std::string>>();
            if (node.contains("cardinality") &&
                node["cardinality"].get<int>() != static_cast<int>(labels[v].size()))
                throw DataError("net json: cardinality disagrees with labels on '" + name + "'");
        }
        DiscreteBayesNet net(std::move(g), std::move(labels));
        for (int v = 0; v < net.num_variables(); ++v) {
            const auto& node = j["nodes"][net.dag().name(v)];
            net.set_cpt(v, node.at("cpt").get<std::vector<std::vector<double>>>());
        }
        return net;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("net json: ") + e.what());
    } catch (const ParameterError& e) {
        throw DataError(std::string("net json: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Parameterization and sampling

DiscreteBayesNet dirichlet_parameterize(const Dag& g, const std::vector<int>& cardinalities,
                                        double alpha, std::uint64_t seed) {
    if (alpha <= 0.0)
        throw ParameterError("dirichlet_parameterize: alpha must be positive");
    if (static_cast<int>(cardinalities.size()) != g.num_variables())
        throw ParameterError("dirichlet_parameterize: one cardinality per variable required");
    std::vector<std::vector<std::string>> labels(g.num_variables());
    for (int v = 0; v < g.num_variables(); ++v) {
        if (cardinalities[v] < 2)
            throw ParameterError("dirichlet_parameterize: cardinality must be at least 2");
        for (int k = 0; k < cardinalities[v]; ++k)
            labels[v].push_back(std::to_string(k));
    }
    DiscreteBayesNet net(g, std::move(labels));
    Rng rng(seed);
    for (int v = 0; v < net.num_variables(); ++v) {
        const int q = net.cpt_row_count(v);
        const int r = net.cardinality(v);
        std::vector<std::vector<double>> rows(q, std::vector<double>(r));
        for (int row = 0; row < q; ++row) {
            double total = 0.0;
            for (int k = 0; k < r; ++k) {
                rows[row][k] = rng.gamma(alpha);
                total += rows[row][k];
            }
            if (total <= 0.0) {
                std::fill(rows[row].begin(), rows[row].end(), 1.0 / r);
            } else {
                for (int k = 0; k < r; ++k)
                    rows[row][k] /= total;
            }
        }
        net.set_cpt(v, std::move(rows));
    }
    return net;
}

DiscreteBayesNet dirichlet_parameterize(const Dag& g, int cardinality, double alpha,
                                        std::uint64_t seed) {
    return dirichlet_parameterize(g, std::vector<int>(g.num_variables(), cardinality), alpha,
                                  seed);
}

Dataset forward_sample(const DiscreteBayesNet& net, int n, std::uint64_t seed) {
    if (n < 0)
        throw ParameterError("forward_sample: negative sample count");
    const int nv = net.num_variables();
    std::vector<std::vector<std::string>> domains(nv);
    for (int v = 0; v < nv; ++v) {
        if (!net.has_cpt(v))
            throw ParameterError("forward_sample: node '" + net.dag().name(v) + "' has no cpt");
        domains[v] = net.labels(v);
    }
    Dataset out(net.dag().variables(), std::move(domains));
    const auto topo = net.dag().topological_order();
    Rng rng(seed);
    std::vector<int> assignment(nv, 0);
    for (int i = 0; i < n; ++i) {
        for (int v : topo)
            assignment[v] = rng.categorical(net.cpt(v)[net.cpt_row_index(v, assignment)]);
        out.add_row(assignment);
    }
    return out;
}

DiscreteBayesNet intervene(const DiscreteBayesNet& net,
                           const std::map<std::string, std::string>& assignments) {
    if (assignments.empty())
        throw ParameterError("intervene: empty assignment");
    std::vector<std::pair<int, int>> targets;  // (variable, forced value)
    for (const auto& [name, label] : assignments) {
        const int v = net.dag().index_of(name);
        targets.emplace_back(v, net.label_index(v, label));
    }

    Dag cut(net.dag().variables());
    std::vector<char> assigned(net.num_variables(), 0);
    for (auto [v, value] : targets) {
        (void)value;
        assigned[v] = 1;
    }
    for (auto [a, b] : net.dag().edges())
        if (!assigned[b])
            cut.add_edge(a, b);

    std::vector<std::vector<std::string>> labels(net.num_variables());
    for (int v = 0; v < net.num_variables(); ++v)
        labels[v] = net.labels(v);
    DiscreteBayesNet out(std::move(cut), std::move(labels));
    for (int v = 0; v < net.num_variables(); ++v)
        if (!assigned[v])
            out.set_cpt(v, net.cpt(v));
    for (auto [v, value] : targets) {
        std::vector<std::vector<double>> point(1, std::vector<double>(net.cardinality(v), 0.0));
        point[0][value] = 1.0;
        out.set_cpt(v, std::move(point));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Variable elimination

namespace {

// Table over a sorted variable scope; the last scope variable varies fastest.
struct Factor {
    std::vector<int> vars;
    std::vector<int> cards;
    std::vector<double> values;
};

std::size_t scope_size(const std::vector<int>& cards) {
    std::size_t total = 1;
    for (int c : cards) {
        total *= static_cast<std::size_t>(c);
        if (total > (1u << 26))
            throw ParameterError("query: intermediate factor too large");
    }
    return total;
}

Factor factor_of_node(const DiscreteBayesNet& net, int v) {
    Factor f;
    f.vars = net.cpt_parents(v);
    f.vars.push_back(v);
    std::sort(f.vars.begin(), f.vars.end());
    for (int u : f.vars)
        f.cards.push_back(net.cardinality(u));
    f.values.assign(scope_size(f.cards), 0.0);

    // Walk all (parent row, value) pairs and scatter into scope order.
    std::vector<int> assignment(net.num_variables(), 0);
    const auto& parents = net.cpt_parents(v);
    const int q = net.cpt_row_count(v);
    for (int row = 0; row < q; ++row) {
        int rem = row;
        for (int i = static_cast<int>(parents.size()) - 1; i >= 0; --i) {
            assignment[parents[i]] = rem % net.cardinality(parents[i]);
            rem /= net.cardinality(parents[i]);
        }
        for (int k = 0; k < net.cardinality(v); ++k) {
            assignment[v] = k;
            std::size_t idx = 0;
            for (std::size_t i = 0; i < f.vars.size(); ++i)
                idx = idx * f.cards[i] + assignment[f.vars[i]];
            f.values[idx] = net.cpt(v)[row][k];
        }
    }
    return f;
}

Factor multiply(const Factor& a, const Factor& b) {
    Factor out;
    std::set_union(a.vars.begin(), a.vars.end(), b.vars.begin(), b.vars.end(),
                   std::back_inserter(out.vars));
    std::vector<std::size_t> stride_a(out.vars.size(), 0), stride_b(out.vars.size(), 0);
    {
        std::size_t s = 1;
        for (int i = static_cast<int>(a.vars.size()) - 1; i >= 0; --i) {
            const auto pos = std::lower_bound(out.vars.begin(), out.vars.end(), a.vars[i]) -
                             out.vars.begin();
            stride_a[pos] = s;
            s *= a.cards[i];
        }
        s = 1;
        for (int i = static_cast<int>(b.vars.size()) - 1; i >= 0; --i) {
            const auto pos = std::lower_bound(out.vars.begin(), out.vars.end(), b.vars[i]) -
                             out.vars.begin();
            stride_b[pos] = s;
            s *= b.cards[i];
        }
    }
    for (std::size_t i = 0; i < out.vars.size(); ++i) {
        const int v = out.vars[i];
        const auto ia = std::lower_bound(a.vars.begin(), a.vars.end(), v);
        out.cards.push_back(ia != a.vars.end() && *ia == v
                                ? a.cards[ia - a.vars.begin()]
                                : b.cards[std::lower_bound(b.vars.begin(), b.vars.end(), v) -
                                          b.vars.begin()]);
    }
    out.values.assign(scope_size(out.cards), 0.0);

    // Odometer over the joint scope with incrementally maintained flat indices.
    std::vector<int> digits(out.vars.size(), 0);
    std::size_t ia = 0, ib = 0;
    for (std::size_t idx = 0;; ++idx) {
        out.values[idx] = a.values[ia] * b.values[ib];
        int pos = static_cast<int>(digits.size()) - 1;
        while (pos >= 0) {
            if (++digits[pos] < out.cards[pos]) {
                ia += stride_a[pos];
                ib += stride_b[pos];
                break;
            }
            digits[pos] = 0;
            ia -= stride_a[pos] * (out.cards[pos] - 1);
            ib -= stride_b[pos] * (out.cards[pos] - 1);
            --pos;
        }
        if (pos < 0)
            break;
    }
    return out;
}

Factor marginalize_out(const Factor& f, int var) {
    const auto it = std::lower_bound(f.vars.begin(), f.vars.end(), var);
    const std::size_t pos = it - f.vars.begin();
    Factor out;
    for (std::size_t i = 0; i < f.vars.size(); ++i) {
        if (i == pos)
            continue;
        out.vars.push_back(f.vars[i]);
        out.cards.push_back(f.cards[i]);
    }
    out.values.assign(std::max<std::size_t>(scope_size(out.cards), 1), 0.0);

    std::size_t inner = 1;
    for (std::size_t i = pos + 1; i < f.vars.size(); ++i)
        inner *= f.cards[i];
    const std::size_t card = f.cards[pos];
    const std::size_t outer_block = inner * card;
    for (std::size_t idx = 0; idx < f.values.size(); ++idx) {
        const std::size_t outer = idx / outer_block;
        const std::size_t rest = idx % inner;
        out.values[outer * inner + rest] += f.values[idx];
    }
    return out;
}

Factor reduce(const Factor& f, int var, int value) {
    const auto it = std::lower_bound(f.vars.begin(), f.vars.end(), var);
    const std::size_t pos = it - f.vars.begin();
    Factor out;
    for (std::size_t i = 0; i < f.vars.size(); ++i) {
        if (i == pos)
            continue;
        out.vars.push_back(f.vars[i]);
        out.cards.push_back(f.cards[i]);
    }
    out.values.assign(std::max<std::size_t>(scope_size(out.cards), 1), 0.0);
    std::size_t inner = 1;
    for (std::size_t i = pos + 1; i < f.vars.size(); ++i)
        inner *= f.cards[i];
    const std::size_t card = f.cards[pos];
    for (std::size_t idx = 0; idx < out.values.size(); ++idx) {
        const std::size_t outer = idx / inner;
        const std::size_t rest = idx % inner;
        out.values[idx] = f.values[(outer * card + value) * inner + rest];
    }
    return out;
}

}  // namespace

CategoricalDistribution query(const DiscreteBayesNet& net, const std::string& target,
                              const std::map<std::string, std::string>& evidence) {
    const int t = net.dag().index_of(target);
    std::map<int, int> ev;
    for (const auto& [name, label] : evidence) {
        const int v = net.dag().index_of(name);
        if (v == t)
            throw ParameterError("query: target cannot appear in the evidence");
        ev[v] = net.label_index(v, label);
    }

    std::vector<Factor> factors;
    for (int v = 0; v < net.num_variables(); ++v) {
        if (!net.has_cpt(v))
            throw ParameterError("query: node '" + net.dag().name(v) + "' has no cpt");
        Factor f = factor_of_node(net, v);
        for (const auto& [u, value] : ev)
            if (std::binary_search(f.vars.begin(), f.vars.end(), u))
                f = reduce(f, u, value);
        factors.push_back(std::move(f));
    }

    std::set<int> to_eliminate;
    for (int v = 0; v < net.num_variables(); ++v)
        if (v != t && !ev.count(v))
            to_eliminate.insert(v);

    while (!to_eliminate.empty()) {
        // Min-degree: fewest distinct co-occurring un-eliminated variables.
        int best = -1;
        std::size_t best_degree = 0;
        for (int v : to_eliminate) {
            std::set<int> co;
            for (const auto& f : factors)
                if (std::binary_search(f.vars.begin(), f.vars.end(), v))
                    co.insert(f.vars.begin(), f.vars.end());
            co.erase(v);
            if (best < 0 || co.size() < best_degree) {
                best = v;
                best_degree = co.size();
            }
        }
        std::vector<Factor> rest;
        Factor product;
        bool have = false;
        for (auto& f : factors) {
            if (std::binary_search(f.vars.begin(), f.vars.end(), best)) {
                product = have ? multiply(product, f) : std::move(f);
                have = true;
            } else {
                rest.push_back(std::move(f));
            }
        }
        if (have)
            rest.push_back(marginalize_out(product, best));
        factors = std::move(rest);
        to_eliminate.erase(best);
    }

    Factor result;
    result.vars = {t};
    result.cards = {net.cardinality(t)};
    result.values.assign(net.cardinality(t), 1.0);
    for (const auto& f : factors)
        result = multiply(result, f);

    double total = 0.0;
    for (double p : result.values)
        total += p;
    if (total <= 0.0)
        throw ZeroProbabilityEvidenceError("query: evidence has probability zero");
    for (double& p : result.values)
        p /= total;
    return CategoricalDistribution::make(net.labels(t), std::move(result.values));
}

CategoricalDistribution interventional_distribution(const DiscreteBayesNet& net,
                                                    const std::string& outcome,
                                                    const std::string& treatment,
                                                    const std::string& value) {
    if (outcome == treatment)
        throw ParameterError("interventional_distribution: outcome equals treatment");
    return query(intervene(net, {{treatment, value}}), outcome, {});
}

// ---------------------------------------------------------------------------
// Fitting

DiscreteBayesNet fit_parameters(const Dag& g, const Dataset& data, double smoothing) {
    if (smoothing < 0.0)
        throw ParameterError("fit_parameters: smoothing must be nonnegative");
    std::vector<int> col_of(g.num_variables());
    std::vector<std::vector<std::string>> labels(g.num_variables());
    for (int v = 0; v < g.num_variables(); ++v) {
        col_of[v] = data.column_index(g.name(v));  // IdentifierError when missing
        labels[v] = data.domain(col_of[v]);
    }
    DiscreteBayesNet net(g, std::move(labels));
    for (int v = 0; v < net.num_variables(); ++v) {
        const int q = net.cpt_row_count(v);
        const int r = net.cardinality(v);
        const auto& parents = net.cpt_parents(v);
        std::vector<double> counts(static_cast<std::size_t>(q) * r, 0.0);
        for (int row = 0; row < data.num_rows(); ++row) {
            int j = 0;
            for (int p : parents)
                j = j * net.cardinality(p) + data.value(row, col_of[p]);
            counts[static_cast<std::size_t>(j) * r + data.value(row, col_of[v])] += 1.0;
        }
        std::vector<std::vector<double>> rows(q, std::vector<double>(r));
        for (int j = 0; j < q; ++j) {
            double n_j = 0.0;
            for (int k = 0; k < r; ++k)
                n_j += counts[static_cast<std::size_t>(j) * r + k];
            if (n_j == 0.0 && smoothing == 0.0)
                throw UndefinedRowError("fit_parameters: parent configuration " +
                                        std::to_string(j) + " of '" + g.name(v) +
                                        "' unobserved and smoothing is zero");
            const double denom = n_j + smoothing * r;
            for (int k = 0; k < r; ++k)
                rows[j][k] = (counts[static_cast<std::size_t>(j) * r + k] + smoothing) / denom;
        }
        net.set_cpt(v, std::move(rows));
    }
    return net;
}

}  // namespace causal
