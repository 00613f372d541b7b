#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "pes/graph.hpp"

namespace pes {

/// Multigraph with edge multiplicities; contractions of simple graphs land here.
struct Multigraph {
    int n = 0;
    std::map<Edge, std::int64_t> mult;

    static Multigraph from_view(const SubgraphView& view) {
        Multigraph m;
        m.n = view.n();
        for (auto e : view.present_edges()) m.mult[e] = 1;
        return m;
    }

    /// Identify vertex b into vertex a; parallel edges accumulate, loops vanish.
    Multigraph contract(int a, int b) const {
        Multigraph out;
        out.n = n;
        for (const auto& [e, k] : mult) {
            int u = e.first == b ? a : e.first;
            int v = e.second == b ? a : e.second;
            if (u == v) continue;
            out.mult[canonical_edge(u, v)] += k;
        }
        return out;
    }

    std::vector<int> active_vertices() const {
        std::vector<char> deg(n, 0);
        for (const auto& [e, _] : mult) deg[e.first] = deg[e.second] = 1;
        std::vector<int> out;
        for (int v = 0; v < n; ++v)
            if (deg[v]) out.push_back(v);
        return out;
    }
};

namespace detail {

/// Fraction-free (Bareiss) integer determinant; exact for the tree counts in scope.
inline std::int64_t bareiss_det(std::vector<std::vector<std::int64_t>> a) {
    int n = static_cast<int>(a.size());
    if (n == 0) return 1;
    std::int64_t prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a[k][k] == 0) {
            int piv = -1;
            for (int i = k + 1; i < n; ++i)
                if (a[i][k] != 0) {
                    piv = i;
                    break;
                }
            if (piv < 0) return 0;
            std::swap(a[k], a[piv]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

struct Dsu {
    std::vector<int> p;
    explicit Dsu(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) {
        while (p[x] != x) x = p[x] = p[p[x]];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        p[a] = b;
        return true;
    }
};

}  // namespace detail

/// Matrix-Tree count over the active vertices (multiplicity-weighted Laplacian).
inline std::int64_t spanning_tree_count(const Multigraph& mg) {
    auto act = mg.active_vertices();
    int k = static_cast<int>(act.size());
    if (k == 0) return 0;
    if (k == 1) return 1;
    if (k > 16) throw GraphError("spanning_tree_count: guard |V| <= 16");
    std::vector<int> pos(mg.n, -1);
    for (int i = 0; i < k; ++i) pos[act[i]] = i;
    // reduced Laplacian: drop the last active vertex
    std::vector<std::vector<std::int64_t>> L(k - 1, std::vector<std::int64_t>(k - 1, 0));
    for (const auto& [e, w] : mg.mult) {
        int i = pos[e.first], j = pos[e.second];
        if (i < k - 1) L[i][i] += w;
        if (j < k - 1) L[j][j] += w;
        if (i < k - 1 && j < k - 1) {
            L[i][j] -= w;
            L[j][i] -= w;
        }
    }
    return detail::bareiss_det(std::move(L));
}

inline std::int64_t spanning_tree_count(const SubgraphView& view) {
    return spanning_tree_count(Multigraph::from_view(view));
}

/// Enumerate every spanning tree (over active vertices) as an edge-index
/// list into `es`. Parallel copies in `es` count as distinct edges.
/// Exponential oracle; guarded.
inline std::vector<std::vector<int>> enumerate_spanning_trees_list(int n,
                                                                   const std::vector<Edge>& es,
                                                                   int max_vertices = 12) {
    if (n > max_vertices) throw GraphError("enumerate_spanning_trees: guard");
    std::vector<char> act(n, 0);
    for (auto [u, v] : es) act[u] = act[v] = 1;
    int k = 0;
    for (char c : act) k += c;
    int need = k - 1;
    std::vector<std::vector<int>> out;
    if (need < 0) return out;
    std::vector<int> chosen;
    auto rec = [&](auto&& self, int i, detail::Dsu dsu) -> void {
        if (static_cast<int>(chosen.size()) == need) {
            out.push_back(chosen);
            return;
        }
        if (i >= static_cast<int>(es.size())) return;
        int remaining = static_cast<int>(es.size()) - i;
        if (static_cast<int>(chosen.size()) + remaining < need) return;
        // include es[i] if it does not close a cycle
        detail::Dsu with = dsu;
        if (with.unite(es[i].first, es[i].second)) {
            chosen.push_back(i);
            self(self, i + 1, with);
            chosen.pop_back();
        }
        self(self, i + 1, dsu);
    };
    rec(rec, 0, detail::Dsu(n));
    return out;
}

inline std::vector<std::vector<int>> enumerate_spanning_trees(const SubgraphView& view,
                                                              int max_vertices = 10) {
    return enumerate_spanning_trees_list(view.n(), view.present_edges(), max_vertices);
}

namespace detail {

/// Walks the unique st-path of a tree; returns +1 if it traverses u->v,
/// -1 for v->u, 0 if the edge is off the path.
inline int tree_path_direction(const std::vector<Edge>& tree_edges, int n, int s, int t,
                               int u, int v) {
    std::vector<std::vector<int>> adj(n);
    for (auto [a, b] : tree_edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<int> parent(n, -2);
    std::vector<int> stack{s};
    parent[s] = -1;
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (int y : adj[x])
            if (parent[y] == -2) {
                parent[y] = x;
                stack.push_back(y);
            }
    }
    if (parent[t] == -2) return 0;
    int cur = t;
    while (cur != s) {
        int pre = parent[cur];
        if (pre == u && cur == v) return 1;
        if (pre == v && cur == u) return -1;
        cur = pre;
    }
    return 0;
}

}  // namespace detail

/// |N_G(u,v)|: spanning trees whose unique st-path traverses (u,v) in that direction.
inline std::int64_t count_trees_using_directed_edge(const SubgraphView& view, int u, int v) {
    auto trees = enumerate_spanning_trees(view);
    const auto es = view.present_edges();
    std::int64_t count = 0;
    for (const auto& tr : trees) {
        std::vector<Edge> te;
        te.reserve(tr.size());
        for (int i : tr) te.push_back(es[i]);
        if (detail::tree_path_direction(te, view.n(), view.parent->s, view.parent->t, u, v) == 1)
            ++count;
    }
    return count;
}

/// theta(u,v) = (|N(u,v)| - |N(v,u)|) / |T_G| by direct enumeration.
inline double flow_via_trees(const SubgraphView& view, int u, int v) {
    auto trees = enumerate_spanning_trees(view);
    if (trees.empty()) throw GraphError("flow_via_trees: no spanning trees");
    const auto es = view.present_edges();
    std::int64_t diff = 0;
    for (const auto& tr : trees) {
        std::vector<Edge> te;
        te.reserve(tr.size());
        for (int i : tr) te.push_back(es[i]);
        diff += detail::tree_path_direction(te, view.n(), view.parent->s, view.parent->t, u, v);
    }
    return static_cast<double>(diff) / static_cast<double>(trees.size());
}

/// Tree-ratio form of the undirected sampling mass on {u,v}: requires
/// {s,t} not an edge of G(x) (the identity's hypothesis; the other case is
/// not covered here).
inline double q_via_trees(const SubgraphView& view, int u, int v) {
    int s = view.parent->s, t = view.parent->t;
    if (view.has_edge(s, t)) throw GraphError("q_via_trees: {s,t} edge present, unsupported");
    auto trees = enumerate_spanning_trees(view);
    if (trees.empty()) throw GraphError("q_via_trees: no spanning trees");
    const auto es = view.present_edges();
    std::int64_t diff = 0;
    for (const auto& tr : trees) {
        std::vector<Edge> te;
        te.reserve(tr.size());
        for (int i : tr) te.push_back(es[i]);
        diff += detail::tree_path_direction(te, view.n(), s, t, u, v);
    }
    Multigraph g = Multigraph::from_view(view);
    Multigraph gbar = g;
    gbar.mult[canonical_edge(s, t)] += 1;
    Multigraph contracted = gbar.contract(std::min(s, t), std::max(s, t));
    std::int64_t t_contracted = spanning_tree_count(contracted);
    if (t_contracted <= 0) throw GraphError("q_via_trees: contracted graph has no trees");
    return static_cast<double>(diff) * static_cast<double>(diff) /
           (static_cast<double>(trees.size()) * static_cast<double>(t_contracted));
}

struct ForestCount {
    std::int64_t with_edge_in_cut = 0;
    std::int64_t total = 0;
    double p_prime() const {
        return total == 0 ? 0.0
                          : static_cast<double>(with_edge_in_cut) / static_cast<double>(total);
    }
};

/// Two-component spanning forests separating s and t; with_edge_in_cut counts
/// those whose unique st-cut contains the directed edge (u,v) (u on the s side).
inline ForestCount count_separating_forests(const SubgraphView& view, int u, int v) {
    if (view.n() > 10) throw GraphError("count_separating_forests: guard |V| <= 10");
    std::vector<Edge> es = view.present_edges();
    std::vector<char> act(view.n(), 0);
    for (auto [a, b] : es) act[a] = act[b] = 1;
    int s = view.parent->s, t = view.parent->t;
    act[s] = act[t] = 1;
    int k = 0;
    for (char c : act) k += c;
    int need = k - 2;
    ForestCount fc;
    if (need < 0) return fc;
    std::vector<int> chosen;
    auto finish = [&](detail::Dsu& dsu) {
        if (dsu.find(s) == dsu.find(t)) return;
        // exactly two components over active vertices
        int roots = 0;
        int rs = dsu.find(s);
        int rt = dsu.find(t);
        for (int x = 0; x < view.n(); ++x)
            if (act[x] && dsu.find(x) == x) ++roots;
        if (roots != 2) return;
        for (int x = 0; x < view.n(); ++x) {
            if (!act[x]) continue;
            int r = dsu.find(x);
            if (r != rs && r != rt) return;
        }
        fc.total++;
        if (dsu.find(u) == rs && dsu.find(v) == rt) fc.with_edge_in_cut++;
    };
    auto rec = [&](auto&& self, int i, detail::Dsu dsu) -> void {
        if (static_cast<int>(chosen.size()) == need) {
            finish(dsu);
            return;
        }
        if (i >= static_cast<int>(es.size())) return;
        if (static_cast<int>(chosen.size()) + (static_cast<int>(es.size()) - i) < need) return;
        detail::Dsu with = dsu;
        if (with.unite(es[i].first, es[i].second)) {
            chosen.push_back(i);
            self(self, i + 1, with);
            chosen.pop_back();
        }
        self(self, i + 1, dsu);
    };
    rec(rec, 0, detail::Dsu(view.n()));
    return fc;
}

}  // namespace pes
