#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "causal/errors.hpp"

namespace causal {

// Directed acyclic graph over named variables. Vertices are dense indices into the
// declaration-order variable list; all mutation preserves acyclicity.
class Dag {
public:
    Dag() = default;
    explicit Dag(std::vector<std::string> variables);

    int num_variables() const { return static_cast<int>(variables_.size()); }
    const std::vector<std::string>& variables() const { return variables_; }
    const std::string& name(int v) const { return variables_.at(v); }
    bool has_variable(const std::string& name) const { return index_.count(name) > 0; }
    int index_of(const std::string& name) const;

    // Throws ParameterError on self-loops, duplicate edges, or edges that would
    // create a directed cycle.
    void add_edge(int parent, int child);
    void add_edge(const std::string& parent, const std::string& child);
    void remove_edge(int parent, int child);

    bool has_edge(int parent, int child) const { return children_.at(parent).count(child) > 0; }
    bool adjacent(int a, int b) const { return has_edge(a, b) || has_edge(b, a); }
    const std::set<int>& parents(int v) const { return parents_.at(v); }
    const std::set<int>& children(int v) const { return children_.at(v); }

    int edge_count() const { return edge_count_; }
    std::vector<std::pair<int, int>> edges() const;

    bool has_path(int from, int to) const;  // directed reachability, counting from == to
    std::vector<int> topological_order() const;
    std::set<int> ancestors(int v) const;    // strict
    std::set<int> descendants(int v) const;  // strict

    // Equality is by variable names and name-level edges, insensitive to
    // declaration order.
    bool operator==(const Dag& other) const;
    bool operator!=(const Dag& other) const { return !(*this == other); }

    nlohmann::json to_json() const;
    static Dag from_json(const nlohmann::json& j);

private:
    std::vector<std::string> variables_;
    std::unordered_map<std::string, int> index_;
    std::vector<std::set<int>> parents_;
    std::vector<std::set<int>> children_;
    int edge_count_ = 0;
};

// Partially directed graph: disjoint directed and undirected edge sets over one
// vertex set. Used for CPDAGs and intermediate learner states. The directed part
// may contain both (a,b) and (b,a); consistent_extension rejects such inputs.
class Pdag {
public:
    Pdag() = default;
    explicit Pdag(std::vector<std::string> variables);
    static Pdag from_dag(const Dag& g);

    int num_variables() const { return static_cast<int>(variables_.size()); }
    const std::vector<std::string>& variables() const { return variables_; }
    const std::string& name(int v) const { return variables_.at(v); }
    bool has_variable(const std::string& name) const { return index_.count(name) > 0; }
    int index_of(const std::string& name) const;

    void add_directed_edge(int from, int to);
    void add_undirected_edge(int a, int b);
    void remove_directed_edge(int from, int to);
    void remove_undirected_edge(int a, int b);
    // Replaces the undirected edge {from,to} by from -> to.
    void orient(int from, int to);

    bool has_directed_edge(int from, int to) const { return children_.at(from).count(to) > 0; }
    bool has_undirected_edge(int a, int b) const { return neighbors_.at(a).count(b) > 0; }
    bool adjacent(int a, int b) const {
        return has_directed_edge(a, b) || has_directed_edge(b, a) || has_undirected_edge(a, b);
    }
    const std::set<int>& parents(int v) const { return parents_.at(v); }
    const std::set<int>& children(int v) const { return children_.at(v); }
    const std::set<int>& neighbors(int v) const { return neighbors_.at(v); }  // undirected only
    std::set<int> adjacency(int v) const;                                     // all three kinds

    int directed_edge_count() const { return directed_count_; }
    int undirected_edge_count() const { return undirected_count_; }
    std::vector<std::pair<int, int>> directed_edges() const;
    std::vector<std::pair<int, int>> undirected_edges() const;  // each pair once, (min,max)

    // Requires every edge to be directed and the result to be acyclic.
    Dag to_dag() const;

    bool operator==(const Pdag& other) const;
    bool operator!=(const Pdag& other) const { return !(*this == other); }

    nlohmann::json to_json() const;
    static Pdag from_json(const nlohmann::json& j);

private:
    std::vector<std::string> variables_;
    std::unordered_map<std::string, int> index_;
    std::vector<std::set<int>> parents_;
    std::vector<std::set<int>> children_;
    std::vector<std::set<int>> neighbors_;
    int directed_count_ = 0;
    int undirected_count_ = 0;
};

// Erdos-Renyi style DAG: variables X01..Xnn, a random topological order, and each
// forward pair kept independently with probability expected_neighbors / (n - 1).
Dag random_dag(int n_vars, double expected_neighbors, std::uint64_t seed);

// d-separation of x and y given z, decided on the moralized ancestral subgraph.
bool d_separated(const Dag& g, int x, int y, const std::set<int>& z);
bool d_separated(const Dag& g, const std::string& x, const std::string& y,
                 const std::set<std::string>& z);

// Completed PDAG of the Markov equivalence class of g: skeleton, v-structures,
// then orientation closure.
Pdag cpdag_of(const Dag& g);

// Repeatedly applies the three orientation-propagation rules until fixpoint:
//   R1: a -> b, b - c, a,c nonadjacent        => b -> c   (no new v-structure)
//   R2: a -> c -> b, a - b                    => a -> b   (no directed cycle)
//   R3: a - b, a - c, a - d, c -> b, d -> b,
//       c,d nonadjacent                       => a -> b
void apply_meek_rules(Pdag& p);

// One DAG in the equivalence class described by p, via Dor-Tarsi sink elimination.
// Ties broken lexicographically by variable name. Throws ExtensionError when no
// consistent extension exists.
Dag consistent_extension(const Pdag& p);

// consistent_extension with a deterministic fallback for inconsistent inputs:
// when no vertex satisfies the sink-plus-clique condition, peels the
// lexicographically first vertex with no outgoing directed edge (dropping the
// clique requirement), skipping orientations that would close a directed cycle.
// Sets *forced when the fallback fired.
Dag extend_or_force(const Pdag& p, bool* forced = nullptr);

// Every DAG in the class of a CPDAG (branch on an undirected edge, close under
// the orientation rules, verify each leaf). ParameterError past the member cap.
std::vector<Dag> enumerate_class_members(const Pdag& cpdag);

}  // namespace causal
