#include "causal/graph.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include "causal/rng.hpp"

namespace causal {

namespace {

std::unordered_map<std::string, int> build_index(const std::vector<std::string>& variables) {
    std::unordered_map<std::string, int> index;
    for (std::size_t i = 0; i < variables.size(); ++i) {
        if (variables[i].empty())
            throw ParameterError("graph: empty variable name");
        if (!index.emplace(variables[i], static_cast<int>(i)).second)
            throw ParameterError("graph: duplicate variable name '" + variables[i] + "'");
    }
    return index;
}

void check_vertex(int v, int n, const char* what) {
    if (v < 0 || v >= n)
        throw ParameterError(std::string(what) + ": vertex index out of range");
}

// Name-keyed edge set for order-insensitive equality.
std::set<std::pair<std::string, std::string>> named_edges(
    const std::vector<std::string>& names, const std::vector<std::pair<int, int>>& edges,
    bool sorted_pair) {
    std::set<std::pair<std::string, std::string>> out;
    for (auto [a, b] : edges) {
        std::string x = names[a], y = names[b];
        if (sorted_pair && y < x)
            std::swap(x, y);
        out.emplace(std::move(x), std::move(y));
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Dag

Dag::Dag(std::vector<std::string> variables)
    : variables_(std::move(variables)),
      index_(build_index(variables_)),
      parents_(variables_.size()),
      children_(variables_.size()) {}

int Dag::index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end())
        throw IdentifierError("graph: unknown variable '" + name + "'");
    return it->second;
}

void Dag::add_edge(int parent, int child) {
    check_vertex(parent, num_variables(), "add_edge");
    check_vertex(child, num_variables(), "add_edge");
    if (parent == child)
        throw ParameterError("add_edge: self-loop on '" + name(parent) + "'");
    if (has_edge(parent, child))
        throw ParameterError("add_edge: duplicate edge " + name(parent) + " -> " + name(child));
    if (has_path(child, parent))
        throw ParameterError("add_edge: edge " + name(parent) + " -> " + name(child) +
                             " would create a cycle");
    children_[parent].insert(child);
    parents_[child].insert(parent);
    ++edge_count_;
}

void Dag::add_edge(const std::string& parent, const std::string& child) {
    add_edge(index_of(parent), index_of(child));
}

void Dag::remove_edge(int parent, int child) {
    check_vertex(parent, num_variables(), "remove_edge");
    check_vertex(child, num_variables(), "remove_edge");
    if (!has_edge(parent, child))
        throw ParameterError("remove_edge: no edge " + name(parent) + " -> " + name(child));
    children_[parent].erase(child);
    parents_[child].erase(parent);
    --edge_count_;
}

std::vector<std::pair<int, int>> Dag::edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(edge_count_);
    for (int v = 0; v < num_variables(); ++v)
        for (int c : children_[v])
            out.emplace_back(v, c);
    return out;
}

bool Dag::has_path(int from, int to) const {
    if (from == to)
        return true;
    std::vector<char> seen(variables_.size(), 0);
    std::deque<int> queue{from};
    seen[from] = 1;
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        for (int c : children_[v]) {
            if (c == to)
                return true;
            if (!seen[c]) {
                seen[c] = 1;
                queue.push_back(c);
            }
        }
    }
    return false;
}

std::vector<int> Dag::topological_order() const {
    const int n = num_variables();
    std::vector<int> in_degree(n);
    for (int v = 0; v < n; ++v)
        in_degree[v] = static_cast<int>(parents_[v].size());
    // Kahn's algorithm with an ordered frontier for a deterministic result.
    std::set<int> frontier;
    for (int v = 0; v < n; ++v)
        if (in_degree[v] == 0)
            frontier.insert(v);
    std::vector<int> order;
    order.reserve(n);
    while (!frontier.empty()) {
        const int v = *frontier.begin();
        frontier.erase(frontier.begin());
        order.push_back(v);
        for (int c : children_[v])
            if (--in_degree[c] == 0)
                frontier.insert(c);
    }
    return order;
}

std::set<int> Dag::ancestors(int v) const {
    check_vertex(v, num_variables(), "ancestors");
    std::set<int> out;
    std::deque<int> queue{v};
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int p : parents_[u])
            if (out.insert(p).second)
                queue.push_back(p);
    }
    return out;
}

std::set<int> Dag::descendants(int v) const {
    check_vertex(v, num_variables(), "descendants");
    std::set<int> out;
    std::deque<int> queue{v};
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int c : children_[u])
            if (out.insert(c).second)
                queue.push_back(c);
    }
    return out;
}

bool Dag::operator==(const Dag& other) const {
    if (std::set<std::string>(variables_.begin(), variables_.end()) !=
        std::set<std::string>(other.variables_.begin(), other.variables_.end()))
        return false;
    return named_edges(variables_, edges(), false) ==
           named_edges(other.variables_, other.edges(), false);
}

nlohmann::json Dag::to_json() const {
    nlohmann::json j;
    j["variables"] = variables_;
    auto named = named_edges(variables_, edges(), false);
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [a, b] : named)
        edges.push_back({a, b});
    j["directed_edges"] = std::move(edges);
    return j;
}

Dag Dag::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("variables") || !j.contains("directed_edges"))
        throw DataError("graph json: expected object with 'variables' and 'directed_edges'");
    if (j.contains("undirected_edges") && !j["undirected_edges"].empty())
        throw DataError("graph json: DAG must not carry undirected edges");
    try {
        Dag g(j["variables"].get<std::vector<std::string>>());
        for (const auto& e : j["directed_edges"]) {
            if (!e.is_array() || e.size() != 2)
                throw DataError("graph json: edge must be a [from, to] pair");
            g.add_edge(e[0].get<std::string>(), e[1].get<std::string>());
        }
        return g;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("graph json: ") + e.what());
    } catch (const ParameterError& e) {
        throw DataError(std::string("graph json: ") + e.what());
    } catch (const IdentifierError& e) {
        throw DataError(std::string("graph json: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Pdag

Pdag::Pdag(std::vector<std::string> variables)
    : variables_(std::move(variables)),
      index_(build_index(variables_)),
      parents_(variables_.size()),
      children_(variables_.size()),
      neighbors_(variables_.size()) {}

Pdag Pdag::from_dag(const Dag& g) {
    Pdag p(g.variables());
    for (auto [a, b] : g.edges())
        p.add_directed_edge(a, b);
    return p;
}

int Pdag::index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end())
        throw IdentifierError("graph: unknown variable '" + name + "'");
    return it->second;
}

void Pdag::add_directed_edge(int from, int to) {
    check_vertex(from, num_variables(), "add_directed_edge");
    check_vertex(to, num_variables(), "add_directed_edge");
    if (from == to)
        throw ParameterError("add_directed_edge: self-loop");
    if (has_directed_edge(from, to))
        throw ParameterError("add_directed_edge: duplicate edge");
    if (has_undirected_edge(from, to))
        throw ParameterError("add_directed_edge: endpoints already share an undirected edge");
    children_[from].insert(to);
    parents_[to].insert(from);
    ++directed_count_;
}

void Pdag::add_undirected_edge(int a, int b) {
    check_vertex(a, num_variables(), "add_undirected_edge");
    check_vertex(b, num_variables(), "add_undirected_edge");
    if (a == b)
        throw ParameterError("add_undirected_edge: self-loop");
    if (has_undirected_edge(a, b))
        throw ParameterError("add_undirected_edge: duplicate edge");
    if (has_directed_edge(a, b) || has_directed_edge(b, a))
        throw ParameterError("add_undirected_edge: endpoints already share a directed edge");
    neighbors_[a].insert(b);
    neighbors_[b].insert(a);
    ++undirected_count_;
}

void Pdag::remove_directed_edge(int from, int to) {
    if (!has_directed_edge(from, to))
        throw ParameterError("remove_directed_edge: no such edge");
    children_[from].erase(to);
    parents_[to].erase(from);
    --directed_count_;
}

void Pdag::remove_undirected_edge(int a, int b) {
    if (!has_undirected_edge(a, b))
        throw ParameterError("remove_undirected_edge: no such edge");
    neighbors_[a].erase(b);
    neighbors_[b].erase(a);
    --undirected_count_;
}

void Pdag::orient(int from, int to) {
    remove_undirected_edge(from, to);
    children_[from].insert(to);
    parents_[to].insert(from);
    ++directed_count_;
}

std::set<int> Pdag::adjacency(int v) const {
    std::set<int> out = neighbors_.at(v);
    out.insert(parents_.at(v).begin(), parents_.at(v).end());
    out.insert(children_.at(v).begin(), children_.at(v).end());
    return out;
}

std::vector<std::pair<int, int>> Pdag::directed_edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(directed_count_);
    for (int v = 0; v < num_variables(); ++v)
        for (int c : children_[v])
            out.emplace_back(v, c);
    return out;
}

std::vector<std::pair<int, int>> Pdag::undirected_edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(undirected_count_);
    for (int v = 0; v < num_variables(); ++v)
        for (int u : neighbors_[v])
            if (v < u)
                out.emplace_back(v, u);
    return out;
}

Dag Pdag::to_dag() const {
    if (undirected_count_ > 0)
        throw ParameterError("to_dag: graph still has undirected edges");
    Dag g(variables_);
    for (auto [a, b] : directed_edges())
        g.add_edge(a, b);  // ParameterError on cycles
    return g;
}

bool Pdag::operator==(const Pdag& other) const {
    if (std::set<std::string>(variables_.begin(), variables_.end()) !=
        std::set<std::string>(other.variables_.begin(), other.variables_.end()))
        return false;
    return named_edges(variables_, directed_edges(), false) ==
               named_edges(other.variables_, other.directed_edges(), false) &&
           named_edges(variables_, undirected_edges(), true) ==
               named_edges(other.variables_, other.undirected_edges(), true);
}

nlohmann::json Pdag::to_json() const {
    nlohmann::json j;
    j["variables"] = variables_;
    auto directed = named_edges(variables_, directed_edges(), false);
    nlohmann::json dj = nlohmann::json::array();
    for (const auto& [a, b] : directed)
        dj.push_back({a, b});
    j["directed_edges"] = std::move(dj);
    auto undirected = named_edges(variables_, undirected_edges(), true);
    nlohmann::json uj = nlohmann::json::array();
    for (const auto& [a, b] : undirected)
        uj.push_back({a, b});
    j["undirected_edges"] = std::move(uj);
    return j;
}

Pdag Pdag::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("variables") || !j.contains("directed_edges"))
        throw DataError("graph json: expected object with 'variables' and 'directed_edges'");
    try {
        Pdag p(j["variables"].get<std::vector<std::string>>());
        for (const auto& e : j["directed_edges"]) {
            if (!e.is_array() || e.size() != 2)
                throw DataError("graph json: edge must be a [from, to] pair");
            p.add_directed_edge(p.index_of(e[0].get<std::string>()),
                                p.index_of(e[1].get<std::string>()));
        }
        if (j.contains("undirected_edges")) {
            for (const auto& e : j["undirected_edges"]) {
                if (!e.is_array() || e.size() != 2)
                    throw DataError("graph json: edge must be a [a, b] pair");
                p.add_undirected_edge(p.index_of(e[0].get<std::string>()),
                                      p.index_of(e[1].get<std::string>()));
            }
        }
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("graph json: ") + e.what());
    } catch (const ParameterError& e) {
        throw DataError(std::string("graph json: ") + e.what());
    } catch (const IdentifierError& e) {
        throw DataError(std::string("graph json: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Generation

Dag random_dag(int n_vars, double expected_neighbors, std::uint64_t seed) {
    if (n_vars < 1)
        throw ParameterError("random_dag: need at least one variable");
    if (expected_neighbors < 0.0)
        throw ParameterError("random_dag: expected_neighbors must be nonnegative");
    double p = 0.0;
    if (n_vars > 1) {
        p = expected_neighbors / static_cast<double>(n_vars - 1);
        if (p > 1.0)
            throw ParameterError("random_dag: expected_neighbors exceeds n_vars - 1");
    } else if (expected_neighbors > 0.0) {
        throw ParameterError("random_dag: single vertex cannot have neighbors");
    }

    int width = 1;
    for (int t = n_vars; t >= 10; t /= 10)
        ++width;
    std::vector<std::string> names(n_vars);
    for (int i = 0; i < n_vars; ++i) {
        std::string num = std::to_string(i + 1);
        names[i] = "X" + std::string(width - num.size(), '0') + num;
    }

    Rng rng(seed);
    std::vector<int> order(n_vars);
    for (int i = 0; i < n_vars; ++i)
        order[i] = i;
    rng.shuffle(order);

    Dag g(std::move(names));
    for (int i = 0; i < n_vars; ++i)
        for (int j = i + 1; j < n_vars; ++j)
            if (rng.uniform() < p)
                g.add_edge(order[i], order[j]);
    return g;
}

// ---------------------------------------------------------------------------
// d-separation

bool d_separated(const Dag& g, int x, int y, const std::set<int>& z) {
    const int n = g.num_variables();
    check_vertex(x, n, "d_separated");
    check_vertex(y, n, "d_separated");
    if (x == y)
        throw ParameterError("d_separated: x and y must differ");
    for (int v : z) {
        check_vertex(v, n, "d_separated");
        if (v == x || v == y)
            throw ParameterError("d_separated: conditioning set contains an endpoint");
    }

    // Ancestral closure of {x, y} + z; parents of members are members, so
    // moralization below never reaches outside the closure.
    std::vector<char> relevant(n, 0);
    std::deque<int> queue;
    auto mark = [&](int v) {
        if (!relevant[v]) {
            relevant[v] = 1;
            queue.push_back(v);
        }
    };
    mark(x);
    mark(y);
    for (int v : z)
        mark(v);
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        for (int pa : g.parents(v))
            mark(pa);
    }

    // Moral graph on the closure: keep edges, marry co-parents, drop directions.
    std::vector<std::set<int>> links(n);
    auto link = [&](int a, int b) {
        links[a].insert(b);
        links[b].insert(a);
    };
    for (int v = 0; v < n; ++v) {
        if (!relevant[v])
            continue;
        const auto& pas = g.parents(v);
        for (auto it = pas.begin(); it != pas.end(); ++it) {
            link(*it, v);
            for (auto jt = std::next(it); jt != pas.end(); ++jt)
                link(*it, *jt);
        }
    }

    // Separated iff x cannot reach y without entering z.
    std::vector<char> seen(n, 0);
    std::deque<int> bfs{x};
    seen[x] = 1;
    while (!bfs.empty()) {
        const int v = bfs.front();
        bfs.pop_front();
        for (int u : links[v]) {
            if (u == y)
                return false;
            if (!seen[u] && !z.count(u)) {
                seen[u] = 1;
                bfs.push_back(u);
            }
        }
    }
    return true;
}

bool d_separated(const Dag& g, const std::string& x, const std::string& y,
                 const std::set<std::string>& z) {
    std::set<int> zi;
    for (const auto& name : z)
        zi.insert(g.index_of(name));
    return d_separated(g, g.index_of(x), g.index_of(y), zi);
}

// ---------------------------------------------------------------------------
// CPDAG machinery

void apply_meek_rules(Pdag& p) {
    const int n = p.num_variables();
    bool changed = true;
    while (changed) {
        changed = false;
        // R1
        for (int a = 0; a < n && !changed; ++a) {
            for (int b : p.children(a)) {
                for (int c : std::set<int>(p.neighbors(b))) {
                    if (c != a && !p.adjacent(a, c)) {
                        p.orient(b, c);
                        changed = true;
                    }
                }
                if (changed)
                    break;
            }
        }
        if (changed)
            continue;
        // R2
        for (int a = 0; a < n && !changed; ++a) {
            for (int b : std::set<int>(p.neighbors(a))) {
                bool chain = false;
                for (int c : p.children(a)) {
                    if (p.has_directed_edge(c, b)) {
                        chain = true;
                        break;
                    }
                }
                if (chain) {
                    p.orient(a, b);
                    changed = true;
                    break;
                }
            }
        }
        if (changed)
            continue;
        // R3
        for (int a = 0; a < n && !changed; ++a) {
            for (int b : std::set<int>(p.neighbors(a))) {
                // Two nonadjacent undirected neighbors of a that both point at b.
                std::vector<int> cands;
                for (int c : p.neighbors(a))
                    if (c != b && p.has_directed_edge(c, b))
                        cands.push_back(c);
                bool fire = false;
                for (std::size_t i = 0; i < cands.size() && !fire; ++i)
                    for (std::size_t j = i + 1; j < cands.size() && !fire; ++j)
                        if (!p.adjacent(cands[i], cands[j]))
                            fire = true;
                if (fire) {
                    p.orient(a, b);
                    changed = true;
                    break;
                }
            }
        }
    }
}

Pdag cpdag_of(const Dag& g) {
    Pdag p(g.variables());
    for (auto [a, b] : g.edges())
        p.add_undirected_edge(a, b);
    // v-structures a -> z <- b with a, b nonadjacent keep their orientation.
    for (int z = 0; z < g.num_variables(); ++z) {
        const auto& pas = g.parents(z);
        for (auto it = pas.begin(); it != pas.end(); ++it)
            for (auto jt = std::next(it); jt != pas.end(); ++jt)
                if (!g.adjacent(*it, *jt)) {
                    if (p.has_undirected_edge(*it, z))
                        p.orient(*it, z);
                    if (p.has_undirected_edge(*jt, z))
                        p.orient(*jt, z);
                }
    }
    apply_meek_rules(p);
    return p;
}

namespace {

// Dor-Tarsi elimination. With require_clique the peeled vertex must be a sink
// whose undirected neighbors are adjacent to all other adjacent vertices (the
// condition that guarantees a consistent extension). Without it the scan degrades
// deterministically — any sink, then any remaining vertex — so it terminates on
// every input, at the price of orientations foreign to the input class.
Dag dor_tarsi(const Pdag& input, bool require_clique, bool* forced) {
    if (forced)
        *forced = false;
    Pdag work = input;
    const int n = work.num_variables();

    // Candidate scans in lexicographic name order for determinism.
    std::vector<int> by_name(n);
    for (int i = 0; i < n; ++i)
        by_name[i] = i;
    std::sort(by_name.begin(), by_name.end(),
              [&](int a, int b) { return work.name(a) < work.name(b); });

    std::vector<std::pair<int, int>> oriented;  // undirected edges, as chosen directions
    std::vector<char> removed(n, 0);
    for (int step = 0; step < n; ++step) {
        int clique_sink = -1, sink = -1, any = -1;
        for (int v : by_name) {
            if (removed[v])
                continue;
            if (any < 0)
                any = v;
            if (!work.children(v).empty())
                continue;
            if (sink < 0)
                sink = v;
            bool ok = true;
            for (int y : work.neighbors(v)) {
                for (int w : work.adjacency(v)) {
                    if (w != y && !work.adjacent(y, w)) {
                        ok = false;
                        break;
                    }
                }
                if (!ok)
                    break;
            }
            if (ok) {
                clique_sink = v;
                break;
            }
        }
        if (require_clique && clique_sink < 0)
            throw ExtensionError("consistent_extension: no removable vertex; "
                                 "graph admits no consistent extension");
        const int found = clique_sink >= 0 ? clique_sink : (sink >= 0 ? sink : any);
        if (clique_sink < 0 && forced)
            *forced = true;
        for (int y : std::set<int>(work.neighbors(found))) {
            oriented.emplace_back(y, found);
            work.remove_undirected_edge(y, found);
        }
        for (int pa : std::set<int>(work.parents(found)))
            work.remove_directed_edge(pa, found);
        for (int ch : std::set<int>(work.children(found)))
            work.remove_directed_edge(found, ch);
        removed[found] = 1;
    }

    Dag g(input.variables());
    if (require_clique) {
        for (auto [a, b] : input.directed_edges())
            g.add_edge(a, b);  // 2-cycles in the input surface here as ParameterError
        for (auto [a, b] : oriented)
            g.add_edge(a, b);
        return g;
    }
    // Forced mode is total: keep each edge if possible, flip it if keeping would
    // close a cycle, drop it if both directions are blocked.
    auto place = [&g](int a, int b) {
        if (g.has_edge(a, b) || g.has_edge(b, a))
            return;
        if (!g.has_path(b, a))
            g.add_edge(a, b);
        else if (!g.has_path(a, b))
            g.add_edge(b, a);
        // else both directions would close a cycle; the pair is dropped
    };
    for (auto [a, b] : input.directed_edges())
        place(a, b);
    for (auto [a, b] : oriented)
        place(a, b);
    return g;
}

}  // namespace

Dag consistent_extension(const Pdag& p) {
    try {
        return dor_tarsi(p, true, nullptr);
    } catch (const ParameterError& e) {
        throw ExtensionError(std::string("consistent_extension: ") + e.what());
    }
}

Dag extend_or_force(const Pdag& p, bool* forced) {
    try {
        return dor_tarsi(p, false, forced);
    } catch (const ParameterError& e) {
        throw ExtensionError(std::string("extend_or_force: ") + e.what());
    }
}

std::vector<Dag> enumerate_class_members(const Pdag& cpdag) {
    constexpr std::size_t kMemberCap = 20000;
    std::vector<Dag> members;

    std::function<void(const Pdag&)> recurse = [&](const Pdag& p) {
        auto undirected = p.undirected_edges();
        if (undirected.empty()) {
            Dag candidate;
            try {
                candidate = p.to_dag();
            } catch (const ParameterError&) {
                return;  // orientation closed a cycle; dead branch
            }
            if (cpdag_of(candidate) == cpdag) {
                if (members.size() >= kMemberCap)
                    throw ParameterError("enumerate_class_members: equivalence class too large");
                members.push_back(std::move(candidate));
            }
            return;
        }
        auto [a, b] = undirected.front();
        for (int dir = 0; dir < 2; ++dir) {
            Pdag next = p;
            if (dir == 0)
                next.orient(a, b);
            else
                next.orient(b, a);
            apply_meek_rules(next);
            recurse(next);
        }
    };
    recurse(cpdag);
    return members;
}

}  // namespace causal
