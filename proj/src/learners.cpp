#include "causal/learners.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "causal/stats.hpp"

namespace causal {

namespace {

// Vertex indices sorted by variable name; every learner scans candidates in this
// order so ties resolve identically from run to run.
std::vector<int> name_order(const std::vector<std::string>& names) {
    std::vector<int> order(names.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return names[a] < names[b]; });
    return order;
}

// Size-k subsets of items in lexicographic position order; fn returning true
// stops the enumeration.
bool for_each_subset(const std::vector<int>& items, int k,
                     const std::function<bool(const std::vector<int>&)>& fn) {
    const int n = static_cast<int>(items.size());
    if (k > n)
        return false;
    std::vector<int> pick(k);
    std::vector<int> subset(k);
    for (int i = 0; i < k; ++i)
        pick[i] = i;
    for (;;) {
        for (int i = 0; i < k; ++i)
            subset[i] = items[pick[i]];
        if (fn(subset))
            return true;
        int i = k - 1;
        while (i >= 0 && pick[i] == n - k + i)
            --i;
        if (i < 0)
            return false;
        ++pick[i];
        for (int j = i + 1; j < k; ++j)
            pick[j] = pick[j - 1] + 1;
    }
}

}  // namespace

int effective_max_cond_set(const LearnerConfig& config, int n_vars) {
    if (config.max_cond_set) {
        if (*config.max_cond_set < 0)
            throw ParameterError("max_cond_set must be nonnegative");
        return *config.max_cond_set;
    }
    return n_vars <= 15 ? n_vars : 3;
}

// ---------------------------------------------------------------------------
// Likelihood-ratio independence test

namespace {

CiDecision g2_core(const Dataset& d, int x, int y, const std::vector<int>& z, double alpha) {
    const int rx = d.cardinality(x);
    const int ry = d.cardinality(y);
    const int n = d.num_rows();

    long long nz = 1;
    for (int zi : z) {
        nz *= d.cardinality(zi);
        if (nz * rx * ry > (1LL << 26))
            throw ParameterError("g2_test: conditioning stratum space too large");
    }

    std::vector<int> counts(static_cast<std::size_t>(nz) * rx * ry, 0);
    for (int row = 0; row < n; ++row) {
        long long s = 0;
        for (int zi : z)
            s = s * d.cardinality(zi) + d.value(row, zi);
        ++counts[static_cast<std::size_t>(s) * rx * ry + d.value(row, x) * ry + d.value(row, y)];
    }

    double g2 = 0.0;
    long long nonempty = 0;
    std::vector<double> rsum(rx), csum(ry);
    for (long long s = 0; s < nz; ++s) {
        const int* cell = counts.data() + s * rx * ry;
        double total = 0.0;
        std::fill(rsum.begin(), rsum.end(), 0.0);
        std::fill(csum.begin(), csum.end(), 0.0);
        for (int i = 0; i < rx; ++i)
            for (int j = 0; j < ry; ++j) {
                rsum[i] += cell[i * ry + j];
                csum[j] += cell[i * ry + j];
                total += cell[i * ry + j];
            }
        if (total == 0.0)
            continue;
        ++nonempty;
        for (int i = 0; i < rx; ++i)
            for (int j = 0; j < ry; ++j) {
                const double o = cell[i * ry + j];
                if (o > 0.0)
                    g2 += 2.0 * o * std::log(o * total / (rsum[i] * csum[j]));
            }
    }

    CiDecision out;
    out.degrees_of_freedom = static_cast<int>((rx - 1) * (ry - 1) * nonempty);
    out.statistic = std::max(g2, 0.0);
    if (out.degrees_of_freedom == 0) {
        // Degenerate table (a constant variable or no data): nothing to test.
        out.p_value = 1.0;
        out.independent = true;
        out.low_power = true;
        return out;
    }
    out.p_value = chi_squared_survival(out.statistic, out.degrees_of_freedom);
    out.independent = out.p_value >= alpha;
    out.low_power = n < 10 * out.degrees_of_freedom;
    return out;
}

}  // namespace

CiDecision g2_test(const Dataset& data, const std::string& x, const std::string& y,
                   const std::vector<std::string>& z, double alpha) {
    if (alpha <= 0.0 || alpha >= 1.0)
        throw ParameterError("g2_test: alpha must lie in (0, 1)");
    const int xi = data.column_index(x);
    const int yi = data.column_index(y);
    if (xi == yi)
        throw ParameterError("g2_test: x and y must differ");
    std::vector<int> zi;
    for (const auto& name : z) {
        const int c = data.column_index(name);
        if (c == xi || c == yi)
            throw ParameterError("g2_test: conditioning set contains a tested variable");
        if (std::count(zi.begin(), zi.end(), c))
            throw ParameterError("g2_test: duplicate conditioning variable '" + name + "'");
        zi.push_back(c);
    }
    return g2_core(data, xi, yi, zi, alpha);
}

CiDecision G2Oracle::test(int x, int y, const std::vector<int>& z) const {
    return g2_core(*data_, x, y, z, alpha_);
}

CiDecision DSeparationOracle::test(int x, int y, const std::vector<int>& z) const {
    CiDecision out;
    out.independent = d_separated(*dag_, x, y, std::set<int>(z.begin(), z.end()));
    out.p_value = out.independent ? 1.0 : 0.0;
    return out;
}

// ---------------------------------------------------------------------------
// Bayesian network score

namespace {

// Per-family Dirichlet-multinomial log marginal likelihood with memoization.
// Works in dataset column indices.
class FamilyScore {
public:
    FamilyScore(const Dataset& data, double ess) : data_(&data), ess_(ess) {
        if (ess_ <= 0.0)
            throw ParameterError("bdeu: equivalent sample size must be positive");
        cache_.resize(data.num_columns());
    }

    double operator()(int node, std::vector<int> parents) {
        std::sort(parents.begin(), parents.end());
        auto& node_cache = cache_[node];
        auto it = node_cache.find(parents);
        if (it != node_cache.end())
            return it->second;
        const double s = compute(node, parents);
        node_cache.emplace(std::move(parents), s);
        return s;
    }

private:
    double compute(int node, const std::vector<int>& parents) const {
        const Dataset& d = *data_;
        const int r = d.cardinality(node);
        double q = 1.0;
        long long qi = 1;
        for (int p : parents) {
            q *= d.cardinality(p);
            qi *= d.cardinality(p);
            if (qi > (1LL << 40))
                throw ParameterError("bdeu: parent configuration space too large");
        }
        const double a_j = ess_ / q;
        const double a_jk = ess_ / (q * r);

        // Group rows by parent configuration. Small spaces use a flat table;
        // larger ones fall back to sorting packed configuration codes.
        std::map<long long, std::vector<int>> sparse;
        std::vector<int> flat;
        const bool use_flat = qi * r <= (1LL << 22);
        if (use_flat)
            flat.assign(static_cast<std::size_t>(qi) * r, 0);
        for (int row = 0; row < d.num_rows(); ++row) {
            long long code = 0;
            for (int p : parents)
                code = code * d.cardinality(p) + d.value(row, p);
            if (use_flat) {
                ++flat[static_cast<std::size_t>(code) * r + d.value(row, node)];
            } else {
                auto& cell = sparse[code];
                if (cell.empty())
                    cell.assign(r, 0);
                ++cell[d.value(row, node)];
            }
        }

        double score = 0.0;
        auto add_config = [&](const int* counts) {
            double n_j = 0.0;
            for (int k = 0; k < r; ++k)
                n_j += counts[k];
            if (n_j == 0.0)
                return;
            score += std::lgamma(a_j) - std::lgamma(a_j + n_j);
            for (int k = 0; k < r; ++k)
                if (counts[k] > 0)
                    score += std::lgamma(a_jk + counts[k]) - std::lgamma(a_jk);
        };
        if (use_flat) {
            for (long long j = 0; j < qi; ++j)
                add_config(flat.data() + j * r);
        } else {
            for (const auto& [code, cell] : sparse) {
                (void)code;
                add_config(cell.data());
            }
        }
        return score;
    }

    const Dataset* data_;
    double ess_;
    std::vector<std::map<std::vector<int>, double>> cache_;
};

}  // namespace

double bdeu_score(const Dataset& data, const Dag& g, double ess) {
    FamilyScore family(data, ess);
    double total = 0.0;
    for (int v = 0; v < g.num_variables(); ++v) {
        std::vector<int> parents;
        for (int p : g.parents(v))
            parents.push_back(data.column_index(g.name(p)));
        total += family(data.column_index(g.name(v)), std::move(parents));
    }
    return total;
}

// ---------------------------------------------------------------------------
// Constraint-based search

Pdag pc(const IndependenceOracle& oracle, const LearnerConfig& config) {
    const auto& names = oracle.variable_names();
    const int n = static_cast<int>(names.size());
    const int max_cond = effective_max_cond_set(config, n);
    const std::vector<int> order = name_order(names);

    Pdag p(names);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            p.add_undirected_edge(i, j);

    std::map<std::pair<int, int>, std::vector<int>> sepsets;
    auto key = [](int a, int b) { return std::pair<int, int>(std::min(a, b), std::max(a, b)); };

    for (int l = 0; l <= max_cond; ++l) {
        // Adjacency snapshot: every level-l removal decision reads the graph as
        // it stood when the level began, so the scan order cannot leak in.
        std::vector<std::vector<int>> adj(n);
        for (int v : order)
            for (int u : order)
                if (u != v && p.has_undirected_edge(v, u))
                    adj[v].push_back(u);

        bool tested_any = false;
        for (int x : order) {
            for (int y : adj[x]) {
                if (!p.has_undirected_edge(x, y))
                    continue;  // removed earlier this level
                std::vector<int> candidates;
                for (int u : adj[x])
                    if (u != y)
                        candidates.push_back(u);
                if (static_cast<int>(candidates.size()) < l)
                    continue;
                tested_any = true;
                for_each_subset(candidates, l, [&](const std::vector<int>& s) {
                    if (!oracle.test(x, y, s).independent)
                        return false;
                    p.remove_undirected_edge(x, y);
                    sepsets[key(x, y)] = s;
                    return true;
                });
            }
        }
        if (!tested_any)
            break;
    }

    // Unshielded triples a - z - b with z outside sep(a, b) are colliders.
    for (int z : order) {
        const std::vector<int> adj_z = [&] {
            std::vector<int> out;
            for (int v : order)
                if (v != z && p.adjacent(z, v))
                    out.push_back(v);
            return out;
        }();
        for (std::size_t i = 0; i < adj_z.size(); ++i) {
            for (std::size_t j = i + 1; j < adj_z.size(); ++j) {
                const int a = adj_z[i], b = adj_z[j];
                if (p.adjacent(a, b))
                    continue;
                const auto it = sepsets.find(key(a, b));
                if (it != sepsets.end() &&
                    std::count(it->second.begin(), it->second.end(), z))
                    continue;
                // First orientation wins; an edge already pointing away stays.
                if (p.has_undirected_edge(a, z))
                    p.orient(a, z);
                if (p.has_undirected_edge(b, z))
                    p.orient(b, z);
            }
        }
    }
    apply_meek_rules(p);
    return p;
}

Pdag pc(const Dataset& data, const LearnerConfig& config) {
    G2Oracle oracle(data, config.alpha);
    return pc(oracle, config);
}

Pdag pc_oracle(const Dag& truth, const LearnerConfig& config) {
    DSeparationOracle oracle(truth);
    return pc(oracle, config);
}

// ---------------------------------------------------------------------------
// Greedy equivalence-class search

namespace {

constexpr double kScoreEps = 1e-9;

struct GesState {
    Pdag cpdag;
    std::vector<int> order;        // name order
    std::vector<int> col_of;       // vertex -> dataset column
};

// Neighbors of y that are adjacent to x (the undirected boundary shared with x).
std::set<int> na_set(const Pdag& p, int y, int x) {
    std::set<int> out;
    for (int u : p.neighbors(y))
        if (p.adjacent(u, x))
            out.insert(u);
    return out;
}

bool is_clique(const Pdag& p, const std::set<int>& nodes) {
    for (auto it = nodes.begin(); it != nodes.end(); ++it)
        for (auto jt = std::next(it); jt != nodes.end(); ++jt)
            if (!p.adjacent(*it, *jt))
                return false;
    return true;
}

// True when every semi-directed path from y to x meets the blocking set.
bool all_paths_blocked(const Pdag& p, int y, int x, const std::set<int>& blocked) {
    if (blocked.count(y) || blocked.count(x))
        return true;
    std::vector<char> seen(p.num_variables(), 0);
    std::vector<int> stack{y};
    seen[y] = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (const auto& next : {p.children(v), p.neighbors(v)}) {
            for (int u : next) {
                if (u == x)
                    return false;
                if (!seen[u] && !blocked.count(u)) {
                    seen[u] = 1;
                    stack.push_back(u);
                }
            }
        }
    }
    return true;
}

std::vector<int> directed_parents_cols(const GesState& st, int y) {
    std::vector<int> out;
    for (int pa : st.cpdag.parents(y))
        out.push_back(st.col_of[pa]);
    return out;
}

void renormalize(GesState& st) {
    st.cpdag = cpdag_of(consistent_extension(st.cpdag));
}

// One forward step: apply the best score-improving insertion, if any.
bool forward_step(GesState& st, FamilyScore& family) {
    const Pdag& p = st.cpdag;
    double best_delta = kScoreEps;
    int best_x = -1, best_y = -1;
    std::vector<int> best_t;

    for (int x : st.order) {
        for (int y : st.order) {
            if (x == y || p.adjacent(x, y))
                continue;
            const std::set<int> na = na_set(p, y, x);
            std::vector<int> t0;
            for (int u : st.order)
                if (u != x && p.neighbors(y).count(u) && !p.adjacent(u, x))
                    t0.push_back(u);
            for (int k = 0; k <= static_cast<int>(t0.size()); ++k) {
                for_each_subset(t0, k, [&](const std::vector<int>& t) {
                    std::set<int> nat(na);
                    nat.insert(t.begin(), t.end());
                    if (!is_clique(p, nat) || !all_paths_blocked(p, y, x, nat))
                        return false;
                    std::vector<int> before = directed_parents_cols(st, y);
                    for (int u : nat)
                        before.push_back(st.col_of[u]);
                    std::vector<int> after = before;
                    after.push_back(st.col_of[x]);
                    const double delta = family(st.col_of[y], std::move(after)) -
                                         family(st.col_of[y], std::move(before));
                    if (delta > best_delta + kScoreEps) {
                        best_delta = delta;
                        best_x = x;
                        best_y = y;
                        best_t = t;
                    }
                    return false;
                });
            }
        }
    }
    if (best_x < 0)
        return false;
    st.cpdag.add_directed_edge(best_x, best_y);
    for (int u : best_t)
        st.cpdag.orient(u, best_y);
    renormalize(st);
    return true;
}

// One backward step: apply the best score-improving deletion, if any.
bool backward_step(GesState& st, FamilyScore& family) {
    const Pdag& p = st.cpdag;
    double best_delta = kScoreEps;
    int best_x = -1, best_y = -1;
    bool best_undirected = false;
    std::vector<int> best_h;

    for (int x : st.order) {
        for (int y : st.order) {
            if (x == y)
                continue;
            const bool undirected = p.has_undirected_edge(x, y);
            if (!undirected && !p.has_directed_edge(x, y))
                continue;
            const std::set<int> na = na_set(p, y, x);
            std::vector<int> h0(na.begin(), na.end());
            std::sort(h0.begin(), h0.end(), [&](int a, int b) {
                return p.name(a) < p.name(b);
            });
            for (int k = 0; k <= static_cast<int>(h0.size()); ++k) {
                for_each_subset(h0, k, [&](const std::vector<int>& h) {
                    std::set<int> keep(na);
                    for (int u : h)
                        keep.erase(u);
                    if (!is_clique(p, keep))
                        return false;
                    std::vector<int> pa = directed_parents_cols(st, y);
                    std::vector<int> base;
                    for (int c : pa)
                        if (c != st.col_of[x])
                            base.push_back(c);
                    for (int u : keep)
                        base.push_back(st.col_of[u]);
                    std::vector<int> with = base;
                    with.push_back(st.col_of[x]);
                    const double delta = family(st.col_of[y], std::move(base)) -
                                         family(st.col_of[y], std::move(with));
                    if (delta > best_delta + kScoreEps) {
                        best_delta = delta;
                        best_x = x;
                        best_y = y;
                        best_h = h;
                        best_undirected = undirected;
                    }
                    return false;
                });
            }
        }
    }
    if (best_x < 0)
        return false;
    if (best_undirected)
        st.cpdag.remove_undirected_edge(best_x, best_y);
    else
        st.cpdag.remove_directed_edge(best_x, best_y);
    for (int u : best_h) {
        if (st.cpdag.has_undirected_edge(best_y, u))
            st.cpdag.orient(best_y, u);
        if (st.cpdag.has_undirected_edge(best_x, u))
            st.cpdag.orient(best_x, u);
    }
    renormalize(st);
    return true;
}

}  // namespace

Pdag ges(const Dataset& data, const LearnerConfig& config) {
    FamilyScore family(data, config.ess);
    GesState st;
    st.cpdag = Pdag(data.columns());
    st.order = name_order(data.columns());
    st.col_of.resize(data.num_columns());
    for (int i = 0; i < data.num_columns(); ++i)
        st.col_of[i] = i;

    const int cap = 4 * data.num_columns() * data.num_columns() + 16;
    int steps = 0;
    while (forward_step(st, family) && ++steps < cap) {
    }
    steps = 0;
    while (backward_step(st, family) && ++steps < cap) {
    }
    return st.cpdag;
}

// ---------------------------------------------------------------------------
// Constraint-screened hill climb

namespace {

// Candidate parent-children set of x: grow by the strongest minimum association,
// drop anything some conditioning subset renders independent, then backward-test
// the survivors.
std::vector<int> mmpc_of(const G2Oracle& oracle, const std::vector<int>& order, int x,
                         int max_cond) {
    std::vector<int> cpc;
    std::map<int, double> max_p;  // worst p-value seen so far per candidate
    std::vector<int> candidates;
    for (int v : order)
        if (v != x)
            candidates.push_back(v);
    for (int v : candidates)
        max_p[v] = 0.0;

    bool first_round = true;
    while (!candidates.empty()) {
        // New conditioning subsets since the last admission: those containing the
        // newest member (every older subset has already been tried).
        std::vector<int> survivors;
        for (int y : candidates) {
            bool excluded = false;
            const int limit = std::min<int>(max_cond, static_cast<int>(cpc.size()));
            for (int k = 0; k <= limit && !excluded; ++k) {
                for_each_subset(cpc, k, [&](const std::vector<int>& s) {
                    if (!first_round &&
                        !std::count(s.begin(), s.end(), cpc.back()))
                        return false;  // already tested in an earlier round
                    const CiDecision d = oracle.test(x, y, s);
                    auto& mp = max_p[y];
                    mp = std::max(mp, d.p_value);
                    if (d.independent) {
                        excluded = true;
                        return true;
                    }
                    return false;
                });
            }
            if (!excluded)
                survivors.push_back(y);
        }
        candidates = std::move(survivors);
        if (candidates.empty())
            break;
        // Admit the candidate whose weakest association is strongest.
        int pick = candidates.front();
        for (int y : candidates)
            if (max_p[y] < max_p[pick])
                pick = y;
        cpc.push_back(pick);
        candidates.erase(std::find(candidates.begin(), candidates.end(), pick));
        first_round = false;
    }

    // Backward pass: re-test each member against subsets of the others.
    std::vector<int> kept;
    for (std::size_t i = 0; i < cpc.size(); ++i) {
        std::vector<int> others;
        for (std::size_t j = 0; j < cpc.size(); ++j)
            if (j != i)
                others.push_back(cpc[j]);
        bool independent = false;
        const int limit = std::min<int>(max_cond, static_cast<int>(others.size()));
        for (int k = 0; k <= limit && !independent; ++k) {
            for_each_subset(others, k, [&](const std::vector<int>& s) {
                if (oracle.test(x, cpc[i], s).independent) {
                    independent = true;
                    return true;
                }
                return false;
            });
        }
        if (!independent)
            kept.push_back(cpc[i]);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

}  // namespace

Dag mmhc(const Dataset& data, const LearnerConfig& config) {
    const int n = data.num_columns();
    const int max_cond = effective_max_cond_set(config, n);
    const std::vector<int> order = name_order(data.columns());
    G2Oracle oracle(data, config.alpha);

    // Symmetrized skeleton of candidate edges.
    std::vector<std::vector<int>> cpc(n);
    for (int v = 0; v < n; ++v)
        cpc[v] = mmpc_of(oracle, order, v, max_cond);
    std::set<std::pair<int, int>> allowed;
    for (int v = 0; v < n; ++v)
        for (int u : cpc[v])
            if (std::count(cpc[u].begin(), cpc[u].end(), v))
                allowed.insert(std::minmax(v, u));

    FamilyScore family(data, config.ess);
    Dag g(data.columns());
    auto parent_cols = [&](int y, int drop = -1, int add = -1) {
        std::vector<int> out;
        for (int pa : g.parents(y))
            if (pa != drop)
                out.push_back(pa);
        if (add >= 0)
            out.push_back(add);
        return out;
    };

    const int cap = 4 * n * n + 16;
    for (int step = 0; step < cap; ++step) {
        double best_delta = kScoreEps;
        int best_op = -1, best_x = -1, best_y = -1;  // 0 add, 1 delete, 2 reverse

        for (int x : order) {
            for (int y : order) {
                if (x == y)
                    continue;
                if (!g.has_edge(x, y)) {
                    if (!allowed.count(std::minmax(x, y)) || g.has_edge(y, x) ||
                        g.has_path(y, x))
                        continue;
                    const double delta =
                        family(y, parent_cols(y, -1, x)) - family(y, parent_cols(y));
                    if (delta > best_delta + kScoreEps) {
                        best_delta = delta;
                        best_op = 0;
                        best_x = x;
                        best_y = y;
                    }
                } else {
                    // Delete x -> y.
                    double delta = family(y, parent_cols(y, x)) - family(y, parent_cols(y));
                    if (delta > best_delta + kScoreEps) {
                        best_delta = delta;
                        best_op = 1;
                        best_x = x;
                        best_y = y;
                    }
                    // Reverse to y -> x: y drops parent x, x gains parent y.
                    // Legal only when no alternative x ~> y path remains.
                    delta = (family(y, parent_cols(y, x)) - family(y, parent_cols(y))) +
                            (family(x, parent_cols(x, -1, y)) - family(x, parent_cols(x)));
                    if (delta > best_delta + kScoreEps) {
                        g.remove_edge(x, y);
                        const bool cycle = g.has_path(x, y);
                        g.add_edge(x, y);
                        if (!cycle) {
                            best_delta = delta;
                            best_op = 2;
                            best_x = x;
                            best_y = y;
                        }
                    }
                }
            }
        }
        if (best_op < 0)
            break;
        if (best_op == 0) {
            g.add_edge(best_x, best_y);
        } else if (best_op == 1) {
            g.remove_edge(best_x, best_y);
        } else {
            g.remove_edge(best_x, best_y);
            g.add_edge(best_y, best_x);
        }
    }
    return g;
}

}  // namespace causal
