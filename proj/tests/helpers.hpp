#pragma once

// Reference implementations used only by the test suite. Each one computes the
// quantity under test directly from its definition, with no shared code paths
// with the library, so agreement is evidence rather than tautology.

#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "causal/bayesnet.hpp"
#include "causal/graph.hpp"

namespace testref {

// Walks every full assignment of a small net, calling fn(assignment, joint mass).
// The joint is the plain product of CPT entries; rows are located by recomputing
// the mixed-radix parent index from the documented layout (lexicographic parent
// order, last parent fastest) rather than through the net's own helper.
inline void enumerate_joint(const causal::DiscreteBayesNet& net,
                            const std::function<void(const std::vector<int>&, double)>& fn) {
    const int n = net.num_variables();
    std::vector<int> assignment(n, 0);
    std::function<void(int)> walk = [&](int v) {
        if (v == n) {
            double mass = 1.0;
            for (int u = 0; u < n; ++u) {
                int row = 0;
                for (int p : net.cpt_parents(u))
                    row = row * net.cardinality(p) + assignment[p];
                mass *= net.cpt(u)[row][assignment[u]];
            }
            fn(assignment, mass);
            return;
        }
        for (int k = 0; k < net.cardinality(v); ++k) {
            assignment[v] = k;
            walk(v + 1);
        }
    };
    walk(0);
}

// P(target | evidence) by summing the enumerated joint. Returns an unnormalized
// vector left for the caller to inspect; normalizing a zero vector is the
// caller's error to detect.
inline std::vector<double> enum_conditional(const causal::DiscreteBayesNet& net, int target,
                                            const std::map<int, int>& evidence) {
    std::vector<double> mass(net.cardinality(target), 0.0);
    enumerate_joint(net, [&](const std::vector<int>& a, double m) {
        for (const auto& [v, value] : evidence)
            if (a[v] != value)
                return;
        mass[a[target]] += m;
    });
    return mass;
}

// P(outcome | do(treatment = value)) by truncated factorization: drop the
// treatment's own CPT term, clamp its value, sum the rest.
inline std::vector<double> enum_interventional(const causal::DiscreteBayesNet& net, int outcome,
                                               int treatment, int value) {
    const int n = net.num_variables();
    std::vector<double> mass(net.cardinality(outcome), 0.0);
    std::vector<int> assignment(n, 0);
    std::function<void(int)> walk = [&](int v) {
        if (v == n) {
            double m = 1.0;
            for (int u = 0; u < n; ++u) {
                if (u == treatment)
                    continue;
                int row = 0;
                for (int p : net.cpt_parents(u))
                    row = row * net.cardinality(p) + assignment[p];
                m *= net.cpt(u)[row][assignment[u]];
            }
            mass[assignment[outcome]] += m;
            return;
        }
        if (v == treatment) {
            assignment[v] = value;
            walk(v + 1);
            return;
        }
        for (int k = 0; k < net.cardinality(v); ++k) {
            assignment[v] = k;
            walk(v + 1);
        }
    };
    walk(0);
    return mass;
}

// The adjustment-formula estimate of p(j | do(i = t)) with adjustment set z,
// computed directly on the enumerated joint table. This is the quantity sid's
// criterion claims to certify, so it serves as the definitional oracle.
inline std::vector<double> adjust_estimate(
    const causal::DiscreteBayesNet& net,
    const std::vector<std::pair<std::vector<int>, double>>& joint, int i, int t, int j,
    const std::set<int>& z) {
    std::vector<int> zs(z.begin(), z.end());
    int configs = 1;
    for (int zv : zs)
        configs *= net.cardinality(zv);
    std::vector<double> pz(configs, 0.0), piz(configs, 0.0);
    std::vector<std::vector<double>> pjiz(configs,
                                          std::vector<double>(net.cardinality(j), 0.0));
    for (const auto& [a, m] : joint) {
        int key = 0;
        for (int zv : zs)
            key = key * net.cardinality(zv) + a[zv];
        pz[key] += m;
        if (a[i] == t) {
            piz[key] += m;
            pjiz[key][a[j]] += m;
        }
    }
    std::vector<double> est(net.cardinality(j), 0.0);
    for (int k = 0; k < configs; ++k) {
        if (pz[k] <= 0.0)
            continue;  // unreachable with Dirichlet parameters, kept for safety
        for (int v = 0; v < net.cardinality(j); ++v)
            est[v] += pjiz[k][v] / piz[k] * pz[k];
    }
    return est;
}

// Number of ordered pairs whose parent-adjustment estimate deviates from the
// true interventional distribution on any of the supplied parameterizations.
inline int numeric_sid(const causal::Dag& true_g, const causal::Dag& learned,
                       const std::vector<causal::DiscreteBayesNet>& nets) {
    const int n = true_g.num_variables();
    int distance = 0;
    for (int li = 0; li < n; ++li) {
        const int i = true_g.index_of(learned.name(li));
        std::set<int> z;
        for (int lp : learned.parents(li))
            z.insert(true_g.index_of(learned.name(lp)));
        for (int j = 0; j < n; ++j) {
            if (j == i)
                continue;
            bool wrong = false;
            for (const causal::DiscreteBayesNet& net : nets) {
                std::vector<std::pair<std::vector<int>, double>> joint;
                enumerate_joint(net, [&](const std::vector<int>& a, double m) {
                    joint.emplace_back(a, m);
                });
                for (int t = 0; t < net.cardinality(i) && !wrong; ++t) {
                    auto est = adjust_estimate(net, joint, i, t, j, z);
                    auto truth = enum_interventional(net, j, i, t);
                    double total = 0.0;
                    for (double m : truth)
                        total += m;
                    for (std::size_t v = 0; v < est.size(); ++v)
                        if (std::abs(est[v] - truth[v] / total) > 1e-7)
                            wrong = true;
                }
                if (wrong)
                    break;
            }
            if (wrong)
                ++distance;
        }
    }
    return distance;
}

// d-separation by brute force: enumerate every simple path in the skeleton and
// check the blocking condition node by node. A path is active given z iff every
// collider on it is in z or has a descendant in z, and no other inner node is
// in z. x and y are d-separated iff no path is active.
inline bool path_d_separated(const causal::Dag& g, int x, int y, const std::set<int>& z) {
    const int n = g.num_variables();
    std::vector<std::set<int>> skeleton(n);
    for (auto [a, b] : g.edges()) {
        skeleton[a].insert(b);
        skeleton[b].insert(a);
    }
    std::vector<std::set<int>> desc_or_self(n);
    for (int v = 0; v < n; ++v) {
        desc_or_self[v] = g.descendants(v);
        desc_or_self[v].insert(v);
    }
    auto collider_open = [&](int v) {
        for (int d : desc_or_self[v])
            if (z.count(d))
                return true;
        return false;
    };

    std::vector<int> path{x};
    std::vector<char> on_path(n, 0);
    on_path[x] = 1;
    bool found_active = false;

    auto path_active = [&]() {
        for (std::size_t i = 1; i + 1 < path.size(); ++i) {
            const int prev = path[i - 1], v = path[i], next = path[i + 1];
            const bool collider = g.has_edge(prev, v) && g.has_edge(next, v);
            if (collider ? !collider_open(v) : z.count(v) > 0)
                return false;
        }
        return true;
    };

    std::function<void()> dfs = [&]() {
        if (found_active)
            return;
        const int v = path.back();
        if (v == y) {
            if (path_active())
                found_active = true;
            return;
        }
        for (int u : skeleton[v]) {
            if (on_path[u])
                continue;
            path.push_back(u);
            on_path[u] = 1;
            dfs();
            on_path[u] = 0;
            path.pop_back();
        }
    };
    dfs();
    return !found_active;
}

// All d-separation statements of a DAG over distinct (x, y, z) triples with
// x < y and z ranging over subsets of the remaining vertices. Used to compare
// equivalence-class members, which must agree exactly.
inline std::vector<bool> d_separation_relation(const causal::Dag& g) {
    const int n = g.num_variables();
    std::vector<bool> out;
    for (int x = 0; x < n; ++x) {
        for (int y = x + 1; y < n; ++y) {
            std::vector<int> rest;
            for (int v = 0; v < n; ++v)
                if (v != x && v != y)
                    rest.push_back(v);
            for (unsigned mask = 0; mask < (1u << rest.size()); ++mask) {
                std::set<int> z;
                for (std::size_t i = 0; i < rest.size(); ++i)
                    if (mask & (1u << i))
                        z.insert(rest[i]);
                out.push_back(causal::d_separated(g, x, y, z));
            }
        }
    }
    return out;
}

}  // namespace testref
