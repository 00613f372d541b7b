#pragma once

#include <memory>
#include <random>
#include <vector>

#include "pes/graph.hpp"
#include "pes/trees.hpp"

namespace pes {

/// Composition tree of a two-terminal series-parallel graph.
/// Leaves are single edges; internal nodes compose their children in
/// series (sink of one identified with source of next) or in parallel
/// (sources identified, sinks identified).
struct SpTerm {
    enum class Kind { Leaf, Series, Parallel };
    Kind kind = Kind::Leaf;
    std::vector<SpTerm> children;

    static SpTerm leaf() { return SpTerm{}; }
    static SpTerm series(SpTerm a, SpTerm b) {
        SpTerm t;
        t.kind = Kind::Series;
        t.children = {std::move(a), std::move(b)};
        return t;
    }
    static SpTerm parallel(SpTerm a, SpTerm b) {
        SpTerm t;
        t.kind = Kind::Parallel;
        t.children = {std::move(a), std::move(b)};
        return t;
    }

    int leaf_count() const {
        if (kind == Kind::Leaf) return 1;
        int c = 0;
        for (const auto& ch : children) c += ch.leaf_count();
        return c;
    }
};

/// Series <-> parallel swap; the combinatorial stand-in for taking the
/// planar dual of the realized graph.
inline SpTerm sp_dual(const SpTerm& t) {
    SpTerm d;
    if (t.kind == SpTerm::Kind::Leaf) return d;
    d.kind = t.kind == SpTerm::Kind::Series ? SpTerm::Kind::Parallel : SpTerm::Kind::Series;
    for (const auto& ch : t.children) d.children.push_back(sp_dual(ch));
    return d;
}

struct SpRealization {
    Graph graph;
    /// Per leaf (in left-to-right order): the st-direction of its edge, i.e.
    /// the unique orientation in which any self-avoiding st-path crosses it.
    std::vector<std::pair<int, int>> leaf_direction;
};

namespace detail {

struct SpBuilder {
    int next_vertex = 0;
    std::vector<Edge> edges;
    std::vector<std::pair<int, int>> directions;

    int fresh() { return next_vertex++; }

    // Realizes term between given source/sink vertices.
    void realize(const SpTerm& t, int src, int snk) {
        switch (t.kind) {
            case SpTerm::Kind::Leaf:
                if (src == snk) throw GraphError("sp term collapses an edge to a loop");
                edges.push_back(canonical_edge(src, snk));
                directions.push_back({src, snk});
                break;
            case SpTerm::Kind::Series: {
                int mid = fresh();
                realize(t.children[0], src, mid);
                realize(t.children[1], mid, snk);
                break;
            }
            case SpTerm::Kind::Parallel:
                realize(t.children[0], src, snk);
                realize(t.children[1], src, snk);
                break;
        }
    }
};

}  // namespace detail

/// Realizes the term as a graph with s = 0, t = 1. Parallel leaves would
/// create multi-edges; they are merged into one (the composition is then not
/// faithful), so callers generating random terms avoid leaf||leaf at the top.
inline SpRealization sp_compose(const SpTerm& t) {
    detail::SpBuilder b;
    b.next_vertex = 2;
    b.realize(t, 0, 1);
    SpRealization r;
    std::vector<Edge> dedup;
    for (auto e : b.edges) {
        if (std::find(dedup.begin(), dedup.end(), e) == dedup.end()) dedup.push_back(e);
    }
    if (dedup.size() != b.edges.size())
        throw GraphError("sp_compose: term realizes a multigraph (parallel edges)");
    r.graph = build_graph(b.next_vertex, b.edges, 0, 1);
    r.leaf_direction = b.directions;
    return r;
}

inline std::pair<int, int> sp_st_direction(const SpRealization& r, int leaf_index) {
    return r.leaf_direction.at(leaf_index);
}

/// Multigraph-tolerant realization: arcs in leaf order, oriented source->sink,
/// terminals 0 (s) and 1 (t). Parallel leaves are kept as distinct arcs.
struct SpArcs {
    int n = 0;
    std::vector<std::pair<int, int>> arcs;
};

inline SpArcs sp_compose_arcs(const SpTerm& t) {
    detail::SpBuilder b;
    b.next_vertex = 2;
    b.realize(t, 0, 1);
    return SpArcs{b.next_vertex, b.directions};
}

/// Probability that a uniform spanning tree's unique st-path (terminals 0, 1)
/// runs through the given leaf's arc. A tree holding one copy of a parallel
/// bundle cannot hold another, so copy membership plus path membership is
/// the per-copy event.
inline double sp_path_probability(const SpArcs& g, int leaf_index) {
    std::vector<Edge> es;
    es.reserve(g.arcs.size());
    for (auto [u, v] : g.arcs) es.push_back(canonical_edge(u, v));
    auto trees = enumerate_spanning_trees_list(g.n, es);
    if (trees.empty()) throw GraphError("sp_path_probability: no spanning trees");
    auto [lu, lv] = g.arcs[leaf_index];
    std::int64_t hits = 0;
    for (const auto& tr : trees) {
        if (std::find(tr.begin(), tr.end(), leaf_index) == tr.end()) continue;
        std::vector<Edge> te;
        te.reserve(tr.size());
        for (int i : tr) te.push_back(es[i]);
        if (detail::tree_path_direction(te, g.n, 0, 1, lu, lv) != 0) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(trees.size());
}

/// Random binary SP term with a given number of leaves. Avoids parallel
/// compositions of bare leaves, which would realize multi-edges.
namespace detail {

/// Whether the term realizes an edge directly between its own terminals
/// (a leaf, or a parallel node with such a child).
inline bool has_direct_edge(const SpTerm& t) {
    if (t.kind == SpTerm::Kind::Leaf) return true;
    if (t.kind == SpTerm::Kind::Series) return false;
    for (const auto& ch : t.children)
        if (has_direct_edge(ch)) return true;
    return false;
}

}  // namespace detail

inline SpTerm random_sp_term(int leaves, std::uint64_t seed) {
    if (leaves < 1) throw GraphError("random_sp_term: need >= 1 leaf");
    std::mt19937_64 rng(seed);
    auto gen = [&](auto&& self, int k) -> SpTerm {
        if (k == 1) return SpTerm::leaf();
        std::uniform_int_distribution<int> split(1, k - 1);
        int left = split(rng);
        SpTerm a = self(self, left);
        SpTerm b = self(self, k - left);
        bool par = std::uniform_int_distribution<int>(0, 1)(rng) == 1;
        // parallel children that both realize a terminal-to-terminal edge
        // would collapse to a multi-edge; force series there
        if (par && detail::has_direct_edge(a) && detail::has_direct_edge(b)) par = false;
        return par ? SpTerm::parallel(std::move(a), std::move(b))
                   : SpTerm::series(std::move(a), std::move(b));
    };
    return gen(gen, leaves);
}

}  // namespace pes
