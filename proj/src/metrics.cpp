#include "causal/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "causal/errors.hpp"

namespace causal {

double tvd(const CategoricalDistribution& p, const CategoricalDistribution& q) {
    if (p.domain != q.domain)
        throw ParameterError("tvd requires identical domains in identical order");
    double total = 0.0;
    for (std::size_t i = 0; i < p.probabilities.size(); ++i)
        total += std::abs(p.probabilities[i] - q.probabilities[i]);
    return 0.5 * total;
}

double aggregate_effects(const EffectTable& table, AggregateMode mode) {
    if (table.entries.empty())
        throw ParameterError("aggregate_effects: empty effect table");
    double total = 0.0;
    for (const EffectEntry& e : table.entries)
        total += e.tvd;
    return mode == AggregateMode::sum ? total
                                      : total / static_cast<double>(table.entries.size());
}

namespace {

enum class EdgeStatus { none, undirected, forward, backward };

void check_same_variables(const std::vector<std::string>& a,
                          const std::vector<std::string>& b, const char* what) {
    std::vector<std::string> sa = a, sb = b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb)
        throw ParameterError(std::string(what) + " requires the same variable set");
}

// Status of the (a, b) pair with both endpoints given in g's own indexing.
EdgeStatus status_of(const Pdag& g, int a, int b) {
    if (g.has_undirected_edge(a, b))
        return EdgeStatus::undirected;
    if (g.has_directed_edge(a, b))
        return EdgeStatus::forward;
    if (g.has_directed_edge(b, a))
        return EdgeStatus::backward;
    return EdgeStatus::none;
}

}  // namespace

int shd(const Pdag& a, const Pdag& b) {
    check_same_variables(a.variables(), b.variables(), "shd");
    // Iterate pairs in a's indexing; look b's endpoints up by name so the two
    // graphs may declare their variables in different orders.
    int distance = 0;
    const int n = a.num_variables();
    for (int i = 0; i < n; ++i) {
        const int bi = b.index_of(a.name(i));
        for (int j = i + 1; j < n; ++j) {
            const int bj = b.index_of(a.name(j));
            if (status_of(a, i, j) != status_of(b, bi, bj))
                ++distance;
        }
    }
    return distance;
}

int shd(const Dag& a, const Dag& b) { return shd(cpdag_of(a), cpdag_of(b)); }
int shd(const Dag& a, const Pdag& b) { return shd(cpdag_of(a), b); }
int shd(const Pdag& a, const Dag& b) { return shd(a, cpdag_of(b)); }

namespace {

// Does adjusting for `z` (in true-graph indexing) recover p(j | do(i)) in g?
// Decided by the adjustment criterion: no element of z may descend from a node
// on a proper causal path from i to j, and z must block i from j in the graph
// with every causal first-edge out of i removed. `reach[u][v]` is directed
// reachability including u == v.
bool adjustment_valid(const Dag& g, const std::vector<std::vector<char>>& reach, int i,
                      int j, const std::set<int>& z) {
    if (z.count(j)) {
        // Conditioning on the outcome collapses the estimate to j's marginal,
        // which is only the interventional answer when i cannot reach j.
        return !reach[i][j];
    }
    const int n = g.num_variables();
    std::vector<char> on_causal_path(n, 0);
    for (int w = 0; w < n; ++w)
        if (w != i && reach[i][w] && reach[w][j])
            on_causal_path[w] = 1;
    for (int zv : z)
        for (int w = 0; w < n; ++w)
            if (on_causal_path[w] && reach[w][zv])
                return false;

    Dag pbd(g.variables());
    for (const auto& [u, v] : g.edges())
        if (u != i || !on_causal_path[v])
            pbd.add_edge(u, v);
    return d_separated(pbd, i, j, z);
}

}  // namespace

int sid(const Dag& true_g, const Dag& learned) {
    check_same_variables(true_g.variables(), learned.variables(), "sid");
    const int n = true_g.num_variables();
    std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            reach[u][v] = true_g.has_path(u, v) ? 1 : 0;

    int distance = 0;
    for (int li = 0; li < n; ++li) {
        const int i = true_g.index_of(learned.name(li));
        std::set<int> z;
        for (int lp : learned.parents(li))
            z.insert(true_g.index_of(learned.name(lp)));
        for (int j = 0; j < n; ++j)
            if (j != i && !adjustment_valid(true_g, reach, i, j, z))
                ++distance;
    }
    return distance;
}

std::pair<int, int> sid_bounds(const Dag& true_g, const Pdag& learned) {
    check_same_variables(true_g.variables(), learned.variables(), "sid_bounds");
    const std::vector<Dag> members = enumerate_class_members(learned);
    if (members.empty())
        throw ParameterError("sid_bounds: input is not a completed class representation");
    int lo = true_g.num_variables() * (true_g.num_variables() - 1) + 1;
    int hi = -1;
    for (const Dag& member : members) {
        const int d = sid(true_g, member);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    return {lo, hi};
}

NormalizedLearned normalize_learned(const Pdag& learned) {
    NormalizedLearned out;
    out.dag = extend_or_force(learned, &out.extension_forced);
    out.cpdag = cpdag_of(out.dag);
    return out;
}

}  // namespace causal
