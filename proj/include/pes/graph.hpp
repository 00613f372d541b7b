#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pes {

using Edge = std::pair<int, int>;  // canonical: first < second

inline Edge canonical_edge(int u, int v) {
    return u < v ? Edge{u, v} : Edge{v, u};
}

struct GraphError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Undirected parent graph with distinguished terminals s, t.
/// Edge order is fixed at construction and defines the directed-basis
/// order used by the span program: edge k occupies directed-basis slots
/// 2k (min->max) and 2k+1 (max->min).
struct Graph {
    int n = 0;
    std::vector<Edge> edges;  // canonical, deduplicated, sorted
    int s = 0;
    int t = 0;

    int edge_index(int u, int v) const {
        Edge e = canonical_edge(u, v);
        auto it = std::lower_bound(edges.begin(), edges.end(), e);
        if (it == edges.end() || *it != e) return -1;
        return static_cast<int>(it - edges.begin());
    }
    bool has_edge(int u, int v) const { return edge_index(u, v) >= 0; }

    /// Directed-basis index of (u,v); u,v must be adjacent in the parent graph.
    int directed_index(int u, int v) const {
        int k = edge_index(u, v);
        if (k < 0) throw GraphError("directed_index: no such edge");
        return 2 * k + (u < v ? 0 : 1);
    }
    std::pair<int, int> directed_endpoints(int idx) const {
        const Edge& e = edges[idx / 2];
        if (idx % 2 == 0) return {e.first, e.second};
        return {e.second, e.first};
    }
};

inline Graph build_graph(int n, const std::vector<Edge>& edge_list, int s, int t) {
    Graph g;
    g.n = n;
    g.s = s;
    g.t = t;
    if (s < 0 || s >= n || t < 0 || t >= n) throw GraphError("terminal out of range");
    std::set<Edge> seen;
    for (auto [u, v] : edge_list) {
        if (u == v) throw GraphError("self-loop");
        if (u < 0 || u >= n || v < 0 || v >= n) throw GraphError("endpoint out of range");
        Edge e = canonical_edge(u, v);
        if (!seen.insert(e).second) throw GraphError("duplicate edge");
    }
    g.edges.assign(seen.begin(), seen.end());
    return g;
}

/// Maps input-string bits to edge sets E_i. Default: bit i <-> edge i.
struct EdgeAssociation {
    int m = 0;
    std::vector<std::vector<int>> assoc;  // bit -> edge indices into Graph::edges

    static EdgeAssociation singletons(const Graph& g) {
        EdgeAssociation a;
        a.m = static_cast<int>(g.edges.size());
        a.assoc.resize(a.m);
        for (int i = 0; i < a.m; ++i) a.assoc[i] = {i};
        return a;
    }

    void validate(const Graph& g) const {
        std::vector<int> cover(g.edges.size(), 0);
        for (const auto& es : assoc)
            for (int e : es) {
                if (e < 0 || e >= static_cast<int>(g.edges.size()))
                    throw GraphError("association references unknown edge");
                cover[e]++;
            }
        for (int c : cover)
            if (c != 1) throw GraphError("every edge must appear in exactly one E_i");
    }
};

/// Exact (circuit-derived) and modeled (analytic) oracle-call counts,
/// attributed per subroutine.
struct QueryLedger {
    struct Entry {
        std::int64_t exact = 0;
        double modeled = 0.0;
    };
    std::map<std::string, Entry> breakdown;

    void charge_exact(const std::string& who, std::int64_t k) { breakdown[who].exact += k; }
    void charge_modeled(const std::string& who, double c) { breakdown[who].modeled += c; }

    std::int64_t total_exact() const {
        std::int64_t s = 0;
        for (const auto& [_, e] : breakdown) s += e.exact;
        return s;
    }
    double total_modeled() const {
        double s = 0;
        for (const auto& [_, e] : breakdown) s += e.modeled;
        return s;
    }
    double grand_total() const { return static_cast<double>(total_exact()) + total_modeled(); }
};

/// Query access to the hidden string x. Bits marked free (the lower-bound
/// family's always/never edges) answer without a ledger charge.
struct InputOracle {
    std::vector<int> x;  // bits, length m
    EdgeAssociation assoc;
    std::set<int> free_bits;  // answered at zero cost
    mutable QueryLedger ledger;

    int m() const { return assoc.m; }

    int query(int i, const std::string& charge_to) const {
        if (i < 0 || i >= m()) throw GraphError("oracle index out of range");
        if (!free_bits.count(i)) ledger.charge_exact(charge_to, 1);
        return x[i];
    }

    /// Trusted snapshot of x for ground-truth computation; never charges.
    const std::vector<int>& snapshot() const { return x; }
};

/// The subgraph G(x): same vertex set, edges whose bit is set.
struct SubgraphView {
    const Graph* parent = nullptr;
    std::vector<char> present;  // per edge index of parent

    int n() const { return parent->n; }
    bool edge_present(int edge_idx) const { return present[edge_idx] != 0; }
    bool has_edge(int u, int v) const {
        int k = parent->edge_index(u, v);
        return k >= 0 && present[k];
    }
    std::vector<Edge> present_edges() const {
        std::vector<Edge> out;
        for (size_t k = 0; k < parent->edges.size(); ++k)
            if (present[k]) out.push_back(parent->edges[k]);
        return out;
    }
    std::vector<std::vector<int>> adjacency() const {
        std::vector<std::vector<int>> adj(parent->n);
        for (size_t k = 0; k < parent->edges.size(); ++k)
            if (present[k]) {
                adj[parent->edges[k].first].push_back(parent->edges[k].second);
                adj[parent->edges[k].second].push_back(parent->edges[k].first);
            }
        return adj;
    }
};

inline SubgraphView subgraph(const Graph& g, const EdgeAssociation& assoc,
                             const std::vector<int>& x_snapshot) {
    SubgraphView v;
    v.parent = &g;
    v.present.assign(g.edges.size(), 0);
    for (int i = 0; i < assoc.m; ++i)
        if (x_snapshot[i])
            for (int e : assoc.assoc[i]) v.present[e] = 1;
    return v;
}

inline SubgraphView full_view(const Graph& g) {
    SubgraphView v;
    v.parent = &g;
    v.present.assign(g.edges.size(), 1);
    return v;
}

/// Vertex deletion. Vertices keep their original ids; the deleted vertex
/// simply loses all incident edges, so bit associations of surviving edges
/// are untouched. Callers treat the id as absent.
inline Graph remove_vertex(const Graph& g, int u) {
    if (u < 0 || u >= g.n) throw GraphError("remove_vertex: out of range");
    Graph out = g;
    out.edges.erase(std::remove_if(out.edges.begin(), out.edges.end(),
                                   [u](const Edge& e) { return e.first == u || e.second == u; }),
                    out.edges.end());
    return out;
}

inline Graph remove_edges(const Graph& g, const std::vector<Edge>& drop) {
    Graph out = g;
    std::set<Edge> dropset;
    for (auto [u, v] : drop) dropset.insert(canonical_edge(u, v));
    out.edges.erase(std::remove_if(out.edges.begin(), out.edges.end(),
                                   [&](const Edge& e) { return dropset.count(e) > 0; }),
                    out.edges.end());
    return out;
}

/// BFS ground truth for st-connectivity; zero ledger charge.
inline bool classical_st_connected(const SubgraphView& view, int a, int b) {
    if (a == b) return true;
    auto adj = view.adjacency();
    std::vector<char> seen(view.n(), 0);
    std::vector<int> stack{a};
    seen[a] = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int v : adj[u]) {
            if (v == b) return true;
            if (!seen[v]) {
                seen[v] = 1;
                stack.push_back(v);
            }
        }
    }
    return false;
}

/// BFS distance in the view, or -1 if disconnected.
inline int bfs_distance(const SubgraphView& view, int a, int b) {
    if (a == b) return 0;
    auto adj = view.adjacency();
    std::vector<int> dist(view.n(), -1);
    std::vector<int> q{a};
    dist[a] = 0;
    for (size_t h = 0; h < q.size(); ++h) {
        int u = q[h];
        for (int v : adj[u]) {
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                if (v == b) return dist[v];
                q.push_back(v);
            }
        }
    }
    return -1;
}

/// All self-avoiding st-paths, each as a vertex sequence. Exponential
/// enumeration oracle, guarded to small graphs.
inline std::vector<std::vector<int>> enumerate_st_paths(const SubgraphView& view,
                                                        int from, int to,
                                                        int max_vertices = 12) {
    if (view.n() > max_vertices) throw GraphError("enumerate_st_paths: graph too large");
    auto adj = view.adjacency();
    for (auto& nb : adj) std::sort(nb.begin(), nb.end());
    std::vector<std::vector<int>> out;
    std::vector<int> path{from};
    std::vector<char> used(view.n(), 0);
    used[from] = 1;
    auto rec = [&](auto&& self, int u) -> void {
        if (u == to) {
            out.push_back(path);
            return;
        }
        for (int v : adj[u]) {
            if (used[v]) continue;
            used[v] = 1;
            path.push_back(v);
            self(self, v);
            path.pop_back();
            used[v] = 0;
        }
    };
    if (from == to) return {{from}};
    rec(rec, from);
    return out;
}

inline std::vector<std::vector<int>> enumerate_st_paths(const SubgraphView& view,
                                                        int max_vertices = 12) {
    return enumerate_st_paths(view, view.parent->s, view.parent->t, max_vertices);
}

}  // namespace pes
