#pragma once

#include <random>
#include <vector>

#include "pes/flow.hpp"
#include "pes/graph.hpp"
#include "pes/span_program.hpp"
#include "pes/trees.hpp"

namespace pes {

/// All connected labeled graphs on exactly n vertices (every vertex present
/// in one component), without terminals.
inline std::vector<std::vector<Edge>> connected_edge_sets(int n) {
    std::vector<Edge> pairs;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) pairs.push_back({u, v});
    std::vector<std::vector<Edge>> out;
    for (std::uint32_t mask = 0; mask < (1u << pairs.size()); ++mask) {
        std::vector<Edge> es;
        for (size_t i = 0; i < pairs.size(); ++i)
            if (mask & (1u << i)) es.push_back(pairs[i]);
        if ((int)es.size() < n - 1) continue;
        detail::Dsu dsu(n);
        int comps = n;
        for (auto [u, v] : es)
            if (dsu.unite(u, v)) --comps;
        if (comps == 1) out.push_back(es);
    }
    return out;
}

/// Exhaustive corpus: every connected graph on 2..n_exhaustive vertices with
/// every ordered terminal pair, plus `samples` random connected graphs for
/// each n in (n_exhaustive, n_max] with random terminals.
inline std::vector<Graph> corpus(int n_exhaustive = 5, int n_max = 7, int samples = 20,
                                 std::uint64_t seed = 12345) {
    std::vector<Graph> out;
    for (int n = 2; n <= n_exhaustive; ++n)
        for (const auto& es : connected_edge_sets(n))
            for (int s = 0; s < n; ++s)
                for (int t = 0; t < n; ++t)
                    if (s != t) out.push_back(build_graph(n, es, s, t));
    std::mt19937_64 rng(seed);
    for (int n = n_exhaustive + 1; n <= n_max; ++n) {
        int got = 0;
        while (got < samples) {
            std::vector<Edge> es;
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            double p = 2.0 * std::log(std::max(2, n)) / n;  // usually connected
            for (int u = 0; u < n; ++u)
                for (int v = u + 1; v < n; ++v)
                    if (unif(rng) < p) es.push_back({u, v});
            detail::Dsu dsu(n);
            int comps = n;
            for (auto [u, v] : es)
                if (dsu.unite(u, v)) --comps;
            if (comps != 1) continue;
            int s = std::uniform_int_distribution<int>(0, n - 1)(rng);
            int t = std::uniform_int_distribution<int>(0, n - 1)(rng);
            if (s == t) continue;
            out.push_back(build_graph(n, es, s, t));
            ++got;
        }
    }
    return out;
}

struct FlowCheck {
    double max_theta_dev = 0;  // Laplacian flow vs tree-ratio flow
    double energy_dev = 0;     // |J(theta*) - R|
};

inline FlowCheck check_flow_identities(const SubgraphView& view) {
    FlowCheck c;
    UnitFlow f = optimal_unit_flow(view);
    double R = effective_resistance(view);
    c.energy_dev = std::abs(f.energy() - R);
    for (auto [u, v] : view.present_edges())
        c.max_theta_dev =
            std::max(c.max_theta_dev, std::abs(f.theta(u, v) - flow_via_trees(view, u, v)));
    return c;
}

struct DistributionCheck {
    double max_q_dev = 0;     // q vs tree-ratio q (only when {s,t} not in E(x))
    double total_dev = 0;     // |sum q - 1|
    double offpath_mass = 0;  // max |theta| on an edge on no self-avoiding st-path
    bool st_edge_present = false;
};

inline DistributionCheck check_distribution(const SubgraphView& view) {
    DistributionCheck c;
    UnitFlow f = optimal_unit_flow(view);
    double R = effective_resistance(view);
    FlowDistribution q = edge_distribution(f, R);
    c.total_dev = std::abs(q.total() - 1.0);
    c.st_edge_present = view.has_edge(view.parent->s, view.parent->t);
    if (!c.st_edge_present) {
        for (auto [u, v] : view.present_edges())
            c.max_q_dev = std::max(
                c.max_q_dev, std::abs(q.q_undirected(u, v) - q_via_trees(view, u, v)));
    }
    // flow support lies on self-avoiding st-paths
    auto paths = enumerate_st_paths(view, view.n());
    std::set<Edge> on_path;
    for (const auto& pth : paths)
        for (size_t i = 0; i + 1 < pth.size(); ++i)
            on_path.insert(canonical_edge(pth[i], pth[i + 1]));
    for (auto [u, v] : view.present_edges())
        if (!on_path.count(canonical_edge(u, v)))
            c.offpath_mass = std::max(c.offpath_mass, std::abs(f.theta(u, v)));
    return c;
}

struct SpanCheck {
    double w_plus_dev = 0;          // |w_+ - R/2|
    double inverse_residual = 0;    // inverse-witness identity residual
    double product_lower = 0;       // w_+ * w~_-  (should be >= 1)
    double neg_size = 0;            // w~_-
    double neg_bound = 0;           // the default c_- n^2 bound it must respect
};

inline SpanCheck check_span_identities(const Graph& g, const std::vector<int>& x,
                                       double c_minus = 2.0) {
    SpanCheck c;
    SpanProgram p = build_stconn_program(g);
    SubgraphView view = subgraph(g, EdgeAssociation::singletons(g), x);
    double R = effective_resistance(view);
    auto pos = positive_witness(p, x);
    auto neg = approx_negative_witness(p, x);
    c.w_plus_dev = std::abs(pos.w_plus - R / 2.0);
    c.inverse_residual = verify_inverse_witness(p, x);
    c.product_lower = pos.w_plus * neg.neg_size;
    c.neg_size = neg.neg_size;
    c.neg_bound = c_minus * g.n * g.n;
    return c;
}

}  // namespace pes
