#include "causal/obsbias.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "causal/csv.hpp"
#include "causal/errors.hpp"
#include "causal/rng.hpp"
#include "causal/stats.hpp"

namespace causal {

namespace {

bool parse_number(const std::string& s, double* out = nullptr) {
    if (s.empty())
        return false;
    const char* begin = s.data();
    const char* end = begin + s.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        return false;
    if (out)
        *out = value;
    return true;
}

std::vector<std::string> sorted_distinct(std::vector<std::string> values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

std::string assignment_text(const std::vector<std::string>& treatments, int mask) {
    std::string out;
    for (std::size_t p = 0; p < treatments.size(); ++p) {
        if (p)
            out += ",";
        out += treatments[p] + "=" + std::to_string((mask >> p) & 1);
    }
    return out;
}

}  // namespace

int FactorialDataset::cell_index(int subject, int mask, int trial_slot) const {
    return (subject * num_assignments() + mask) * num_trials() + trial_slot;
}

const std::string& FactorialDataset::covariate_value(int subject, int covariate) const {
    return covariate_values_.at(subject).at(covariate);
}

const std::vector<std::string>& FactorialDataset::outcomes_at(int subject, int mask,
                                                              int trial_slot) const {
    return cells_.at(cell_index(subject, mask, trial_slot));
}

const std::vector<std::string>& FactorialDataset::covariate_domain(int covariate) const {
    return covariate_domains_.at(covariate);
}

const std::vector<std::string>& FactorialDataset::outcome_domain(int outcome) const {
    return outcome_domains_.at(outcome);
}

void FactorialDataset::rebuild_domains() {
    covariate_domains_.assign(covariate_names_.size(), {});
    for (std::size_t c = 0; c < covariate_names_.size(); ++c) {
        std::vector<std::string> values;
        for (const auto& row : covariate_values_)
            values.push_back(row[c]);
        covariate_domains_[c] = sorted_distinct(std::move(values));
    }
    outcome_domains_.assign(outcome_names_.size(), {});
    for (std::size_t o = 0; o < outcome_names_.size(); ++o) {
        std::vector<std::string> values;
        for (const auto& cell : cells_)
            values.push_back(cell[o]);
        outcome_domains_[o] = sorted_distinct(std::move(values));
    }
}

FactorialDataset FactorialDataset::create(std::vector<std::string> covariate_names,
                                          std::vector<std::string> treatment_names,
                                          std::vector<std::string> outcome_names,
                                          const std::vector<FactorialRecord>& records) {
    if (treatment_names.empty() || outcome_names.empty())
        throw ParameterError("factorial dataset needs at least one treatment and one outcome");
    if (treatment_names.size() > 20)
        throw ParameterError("factorial dataset: too many treatments for a full grid");
    {
        std::vector<std::string> all = covariate_names;
        all.insert(all.end(), treatment_names.begin(), treatment_names.end());
        all.insert(all.end(), outcome_names.begin(), outcome_names.end());
        all.push_back("subject_id");
        all.push_back("trial");
        if (sorted_distinct(all).size() != all.size())
            throw ParameterError("factorial dataset: duplicate column name");
    }

    FactorialDataset out;
    out.covariate_names_ = std::move(covariate_names);
    out.treatment_names_ = std::move(treatment_names);
    out.outcome_names_ = std::move(outcome_names);

    const int m = out.num_treatments();
    std::map<std::string, int> subject_index;
    std::set<int> trial_set;
    for (const FactorialRecord& r : records) {
        if (!subject_index.count(r.subject)) {
            subject_index[r.subject] = static_cast<int>(out.subjects_.size());
            out.subjects_.push_back(r.subject);
            if (r.covariates.size() != out.covariate_names_.size())
                throw DataError("factorial record for subject " + r.subject +
                                ": wrong covariate count");
            out.covariate_values_.push_back(r.covariates);
        }
        trial_set.insert(r.trial);
    }
    if (out.subjects_.empty())
        throw DataError("factorial dataset: no records");
    out.trials_.assign(trial_set.begin(), trial_set.end());

    const int cells = out.num_cells();
    out.cells_.assign(cells, {});
    std::vector<char> seen(cells, 0);
    std::map<int, int> trial_slot;
    for (int i = 0; i < out.num_trials(); ++i)
        trial_slot[out.trials_[i]] = i;

    for (const FactorialRecord& r : records) {
        const int s = subject_index.at(r.subject);
        if (r.covariates != out.covariate_values_[s])
            throw DataError("subject " + r.subject + ": covariate values vary across records");
        if (static_cast<int>(r.treatments.size()) != m)
            throw DataError("subject " + r.subject + ": wrong treatment count");
        int mask = 0;
        for (int p = 0; p < m; ++p) {
            if (r.treatments[p] != 0 && r.treatments[p] != 1)
                throw DataError("treatment " + out.treatment_names_[p] +
                                " has non-binary value for subject " + r.subject);
            mask |= r.treatments[p] << p;
        }
        if (r.outcomes.size() != out.outcome_names_.size())
            throw DataError("subject " + r.subject + ": wrong outcome count");
        const int idx = out.cell_index(s, mask, trial_slot.at(r.trial));
        if (seen[idx])
            throw DataError("duplicate factorial cell: subject=" + r.subject + " assignment=" +
                            assignment_text(out.treatment_names_, mask) +
                            " trial=" + std::to_string(r.trial));
        seen[idx] = 1;
        out.cells_[idx] = r.outcomes;
    }

    for (int s = 0; s < out.num_subjects(); ++s)
        for (int mask = 0; mask < out.num_assignments(); ++mask)
            for (int t = 0; t < out.num_trials(); ++t)
                if (!seen[out.cell_index(s, mask, t)])
                    throw DataError("incomplete factorial grid: missing cell subject=" +
                                    out.subjects_[s] + " assignment=" +
                                    assignment_text(out.treatment_names_, mask) +
                                    " trial=" + std::to_string(out.trials_[t]));

    out.rebuild_domains();
    return out;
}

void FactorialDataset::save(const std::string& csv_path, const std::string& roles_path) const {
    std::ofstream csv(csv_path);
    if (!csv)
        throw DataError("cannot write " + csv_path);
    std::vector<std::string> header{"subject_id", "trial"};
    header.insert(header.end(), covariate_names_.begin(), covariate_names_.end());
    header.insert(header.end(), treatment_names_.begin(), treatment_names_.end());
    header.insert(header.end(), outcome_names_.begin(), outcome_names_.end());
    write_csv_row(csv, header);
    for (int s = 0; s < num_subjects(); ++s) {
        for (int t = 0; t < num_trials(); ++t) {
            for (int mask = 0; mask < num_assignments(); ++mask) {
                std::vector<std::string> row{subjects_[s], std::to_string(trials_[t])};
                for (const std::string& v : covariate_values_[s])
                    row.push_back(v);
                for (int p = 0; p < num_treatments(); ++p)
                    row.push_back(std::to_string(treatment_bit(mask, p)));
                const auto& cell = cells_[cell_index(s, mask, t)];
                row.insert(row.end(), cell.begin(), cell.end());
                write_csv_row(csv, row);
            }
        }
    }

    nlohmann::json roles;
    roles["columns"] = nlohmann::json::array();
    auto add = [&](const std::string& name, const char* role,
                   const std::vector<std::string>& domain) {
        roles["columns"].push_back({{"name", name}, {"role", role}, {"domain", domain}});
    };
    for (std::size_t c = 0; c < covariate_names_.size(); ++c)
        add(covariate_names_[c], "covariate", covariate_domains_[c]);
    for (const std::string& t : treatment_names_)
        add(t, "treatment", {"0", "1"});
    for (std::size_t o = 0; o < outcome_names_.size(); ++o)
        add(outcome_names_[o], "outcome", outcome_domains_[o]);
    std::ofstream rf(roles_path);
    if (!rf)
        throw DataError("cannot write " + roles_path);
    rf << roles.dump(2) << "\n";
}

FactorialDataset FactorialDataset::load(const std::string& csv_path,
                                        const std::string& roles_path) {
    std::ifstream rf(roles_path);
    if (!rf)
        throw DataError("cannot read " + roles_path);
    nlohmann::json roles;
    try {
        roles = nlohmann::json::parse(rf);
    } catch (const nlohmann::json::exception& e) {
        throw DataError("roles sidecar " + roles_path + ": " + e.what());
    }
    std::map<std::string, std::string> role_of;
    if (!roles.is_object() || !roles.contains("columns") || !roles["columns"].is_array())
        throw DataError("roles sidecar " + roles_path + ": expected a columns array");
    for (const auto& entry : roles["columns"]) {
        if (!entry.contains("name") || !entry.contains("role"))
            throw DataError("roles sidecar " + roles_path + ": column entry needs name and role");
        const std::string role = entry["role"].get<std::string>();
        if (role != "covariate" && role != "treatment" && role != "outcome")
            throw DataError("roles sidecar: unknown role '" + role + "'");
        role_of[entry["name"].get<std::string>()] = role;
    }

    std::ifstream csv(csv_path);
    if (!csv)
        throw DataError("cannot read " + csv_path);
    const auto table = read_csv_table(csv);
    if (table.empty())
        throw DataError(csv_path + ": empty file");
    const auto& header = table.front();
    if (header.size() < 3 || header[0] != "subject_id" || header[1] != "trial")
        throw DataError(csv_path + ": header must start with subject_id, trial");

    std::vector<std::string> covs, treats, outs;
    std::vector<int> col_role;  // 0 cov, 1 treat, 2 out, per data column
    for (std::size_t c = 2; c < header.size(); ++c) {
        const auto it = role_of.find(header[c]);
        if (it == role_of.end())
            throw DataError("roles sidecar is missing column '" + header[c] + "'");
        if (it->second == "covariate") {
            col_role.push_back(0);
            covs.push_back(header[c]);
        } else if (it->second == "treatment") {
            col_role.push_back(1);
            treats.push_back(header[c]);
        } else {
            col_role.push_back(2);
            outs.push_back(header[c]);
        }
    }

    std::vector<FactorialRecord> records;
    for (std::size_t rix = 1; rix < table.size(); ++rix) {
        const auto& row = table[rix];
        FactorialRecord rec;
        rec.subject = row[0];
        double trial = 0.0;
        if (!parse_number(row[1], &trial) || trial != std::floor(trial))
            throw DataError(csv_path + ": non-integer trial '" + row[1] + "'");
        rec.trial = static_cast<int>(trial);
        for (std::size_t c = 2; c < header.size(); ++c) {
            const std::string& v = row[c];
            switch (col_role[c - 2]) {
                case 0:
                    rec.covariates.push_back(v);
                    break;
                case 1: {
                    if (v != "0" && v != "1")
                        throw DataError(csv_path + ": treatment " + header[c] +
                                        " has non-binary value '" + v + "'");
                    rec.treatments.push_back(v == "1" ? 1 : 0);
                    break;
                }
                default:
                    rec.outcomes.push_back(v);
            }
        }
        records.push_back(std::move(rec));
    }
    return create(std::move(covs), std::move(treats), std::move(outs), records);
}

std::vector<int> covariate_codes(const FactorialDataset& data, const std::string& covariate) {
    const auto& names = data.covariate_names();
    const auto it = std::find(names.begin(), names.end(), covariate);
    if (it == names.end())
        throw IdentifierError("unknown covariate '" + covariate + "'");
    const int c = static_cast<int>(it - names.begin());

    std::vector<std::string> values = data.covariate_domain(c);
    bool numeric = true;
    std::vector<double> parsed(values.size());
    for (std::size_t i = 0; i < values.size() && numeric; ++i)
        numeric = parse_number(values[i], &parsed[i]);
    std::vector<int> order(values.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = static_cast<int>(i);
    if (numeric)
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return parsed[a] < parsed[b]; });
    // else: the domain is already lexicographically sorted.

    std::map<std::string, int> code;
    for (std::size_t rank = 0; rank < order.size(); ++rank)
        code[values[order[rank]]] = static_cast<int>(rank) + 1;

    std::vector<int> out(data.num_subjects());
    for (int s = 0; s < data.num_subjects(); ++s)
        out[s] = code.at(data.covariate_value(s, c));
    return out;
}

namespace {

// Empty dataset whose columns and domains mirror the grid's data columns.
Dataset flat_frame(const FactorialDataset& data) {
    std::vector<std::string> columns = data.covariate_names();
    columns.insert(columns.end(), data.treatment_names().begin(), data.treatment_names().end());
    columns.insert(columns.end(), data.outcome_names().begin(), data.outcome_names().end());
    std::vector<std::vector<std::string>> domains;
    for (std::size_t c = 0; c < data.covariate_names().size(); ++c)
        domains.push_back(data.covariate_domain(static_cast<int>(c)));
    for (int p = 0; p < data.num_treatments(); ++p)
        domains.push_back({"0", "1"});
    for (std::size_t o = 0; o < data.outcome_names().size(); ++o)
        domains.push_back(data.outcome_domain(static_cast<int>(o)));
    return Dataset(std::move(columns), std::move(domains));
}

}  // namespace

Dataset to_dataset(const FactorialDataset& data) {
    Dataset out = flat_frame(data);
    for (int s = 0; s < data.num_subjects(); ++s) {
        for (int slot = 0; slot < data.num_trials(); ++slot) {
            for (int mask = 0; mask < data.num_assignments(); ++mask) {
                std::vector<std::string> row;
                for (std::size_t c = 0; c < data.covariate_names().size(); ++c)
                    row.push_back(data.covariate_value(s, static_cast<int>(c)));
                for (int p = 0; p < data.num_treatments(); ++p)
                    row.push_back(std::to_string(FactorialDataset::treatment_bit(mask, p)));
                const auto& cell = data.outcomes_at(s, mask, slot);
                row.insert(row.end(), cell.begin(), cell.end());
                out.add_row_labels(row);
            }
        }
    }
    return out;
}

Dataset logistic_bias_sample(const FactorialDataset& data, double beta,
                             const std::string& covariate, std::uint64_t seed,
                             BiasMode mode) {
    if (!(beta >= 0.0))
        throw ParameterError("logistic_bias_sample: beta must be nonnegative");
    const std::vector<int> codes = covariate_codes(data, covariate);
    Dataset out = flat_frame(data);

    Rng rng(seed);
    const int m = data.num_treatments();
    for (int s = 0; s < data.num_subjects(); ++s) {
        std::vector<int> slots;
        if (mode == BiasMode::all_trials) {
            for (int t = 0; t < data.num_trials(); ++t)
                slots.push_back(t);
        } else {
            slots.push_back(static_cast<int>(
                rng.uniform_int(static_cast<std::uint64_t>(data.num_trials()))));
        }
        for (int slot : slots) {
            int mask = 0;
            for (int p = 0; p < m; ++p) {
                const int j = p + 1;
                const int sign = (codes[s] * j) % 2 == 0 ? 1 : -1;
                const double prob = logistic(sign * beta);
                if (rng.bernoulli(prob))
                    mask |= 1 << p;
            }
            std::vector<std::string> row;
            for (std::size_t c = 0; c < data.covariate_names().size(); ++c)
                row.push_back(data.covariate_value(s, static_cast<int>(c)));
            for (int p = 0; p < m; ++p)
                row.push_back(std::to_string((mask >> p) & 1));
            const auto& cell = data.outcomes_at(s, mask, slot);
            row.insert(row.end(), cell.begin(), cell.end());
            out.add_row_labels(row);
        }
    }
    return out;
}

namespace {

// Equal-frequency cut points: category of x = number of boundaries <= x, with
// boundaries at the sorted column's k/bins quantile positions.
std::vector<double> bin_edges(std::vector<double> values, int bins) {
    std::sort(values.begin(), values.end());
    if (values.front() == values.back())
        return {};  // constant column: one category
    std::vector<double> edges;
    const std::size_t n = values.size();
    for (int k = 1; k < bins; ++k) {
        const double e = values[n * static_cast<std::size_t>(k) / bins];
        // Skip duplicates and edges at the minimum, which would leave an
        // empty bottom category.
        if (e > values.front() && (edges.empty() || e > edges.back()))
            edges.push_back(e);
    }
    return edges;
}

int category_of(double x, const std::vector<double>& edges) {
    int cat = 0;
    for (double e : edges)
        if (x >= e)
            ++cat;
    return cat;
}

std::string category_label(int cat, int bins) {
    const int width = static_cast<int>(std::to_string(bins - 1).size());
    std::string s = std::to_string(cat);
    return std::string(width - static_cast<int>(s.size()), '0') + s;
}

}  // namespace

FactorialDataset prepare_dataset(const FactorialDataset& data, int bins,
                                 const std::vector<int>& control_assignment,
                                 std::vector<std::string>* warnings) {
    if (bins < 2)
        throw ParameterError("prepare_dataset: bins must be at least 2");
    const int m = data.num_treatments();
    std::vector<int> control = control_assignment;
    if (control.empty())
        control.assign(m, 0);
    if (static_cast<int>(control.size()) != m)
        throw ParameterError("prepare_dataset: control assignment length mismatch");
    int control_mask = 0;
    for (int p = 0; p < m; ++p) {
        if (control[p] != 0 && control[p] != 1)
            throw ParameterError("prepare_dataset: control assignment must be binary");
        control_mask |= control[p] << p;
    }

    // Gather per-column values across the canonical cell order.
    const int S = data.num_subjects(), A = data.num_assignments(), T = data.num_trials();
    auto warn = [&](const std::string& message) {
        if (warnings)
            warnings->push_back(message);
    };

    // Outcomes: normalize by control median, then discretize.
    std::vector<std::vector<std::string>> new_outcomes(
        static_cast<std::size_t>(S) * A * T,
        std::vector<std::string>(data.outcome_names().size()));
    for (std::size_t o = 0; o < data.outcome_names().size(); ++o) {
        bool numeric = true;
        for (const std::string& v : data.outcome_domain(static_cast<int>(o)))
            if (!parse_number(v)) {
                numeric = false;
                break;
            }
        if (!numeric) {
            for (int s = 0; s < S; ++s)
                for (int mask = 0; mask < A; ++mask)
                    for (int t = 0; t < T; ++t)
                        new_outcomes[(static_cast<std::size_t>(s) * A + mask) * T + t][o] =
                            data.outcomes_at(s, mask, t)[o];
            continue;
        }
        std::vector<double> control_values;
        for (int s = 0; s < S; ++s)
            for (int t = 0; t < T; ++t) {
                double x = 0.0;
                parse_number(data.outcomes_at(s, control_mask, t)[o], &x);
                control_values.push_back(x);
            }
        const double baseline = median(control_values);
        if (baseline == 0.0)
            throw DataError("prepare_dataset: zero control median for outcome " +
                            data.outcome_names()[o]);
        std::vector<double> all;
        all.reserve(static_cast<std::size_t>(S) * A * T);
        for (int s = 0; s < S; ++s)
            for (int mask = 0; mask < A; ++mask)
                for (int t = 0; t < T; ++t) {
                    double x = 0.0;
                    parse_number(data.outcomes_at(s, mask, t)[o], &x);
                    all.push_back(x / baseline);
                }
        const std::vector<double> edges = bin_edges(all, bins);
        if (edges.empty())
            warn("outcome " + data.outcome_names()[o] +
                 " is constant after normalization; emitting a single category");
        std::size_t i = 0;
        for (int s = 0; s < S; ++s)
            for (int mask = 0; mask < A; ++mask)
                for (int t = 0; t < T; ++t, ++i)
                    new_outcomes[(static_cast<std::size_t>(s) * A + mask) * T + t][o] =
                        category_label(category_of(all[i], edges), bins);
    }

    // Covariates: discretize numeric columns with more than `bins` levels.
    std::vector<std::vector<std::string>> new_covs(S,
                                                   std::vector<std::string>(
                                                       data.covariate_names().size()));
    for (std::size_t c = 0; c < data.covariate_names().size(); ++c) {
        const auto& domain = data.covariate_domain(static_cast<int>(c));
        bool numeric = true;
        for (const std::string& v : domain)
            if (!parse_number(v)) {
                numeric = false;
                break;
            }
        if (!numeric || static_cast<int>(domain.size()) <= bins) {
            for (int s = 0; s < S; ++s)
                new_covs[s][c] = data.covariate_value(s, static_cast<int>(c));
            continue;
        }
        std::vector<double> values(S);
        for (int s = 0; s < S; ++s)
            parse_number(data.covariate_value(s, static_cast<int>(c)), &values[s]);
        const std::vector<double> edges = bin_edges(values, bins);
        if (edges.empty())
            warn("covariate " + data.covariate_names()[c] +
                 " is constant; emitting a single category");
        for (int s = 0; s < S; ++s)
            new_covs[s][c] = category_label(category_of(values[s], edges), bins);
    }

    std::vector<FactorialRecord> records;
    records.reserve(static_cast<std::size_t>(S) * A * T);
    for (int s = 0; s < S; ++s)
        for (int t = 0; t < T; ++t)
            for (int mask = 0; mask < A; ++mask) {
                FactorialRecord rec;
                rec.subject = data.subjects()[s];
                rec.trial = data.trials()[t];
                rec.covariates = new_covs[s];
                for (int p = 0; p < m; ++p)
                    rec.treatments.push_back(FactorialDataset::treatment_bit(mask, p));
                rec.outcomes = new_outcomes[(static_cast<std::size_t>(s) * A + mask) * T + t];
                records.push_back(std::move(rec));
            }
    return FactorialDataset::create(data.covariate_names(), data.treatment_names(),
                                    data.outcome_names(), records);
}

}  // namespace causal
