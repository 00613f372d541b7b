#pragma once

#include <Eigen/Dense>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "pes/flow.hpp"
#include "pes/graph.hpp"
#include "pes/series_parallel.hpp"

namespace pes {

/// A generated instance with ground-truth metadata, re-verified against the
/// flow engine at construction.
struct FamilyInstance {
    std::string family;
    Graph graph;
    EdgeAssociation assoc;
    std::vector<int> x;
    std::set<int> free_ones;   // bits that always answer 1, query cost 0
    std::set<int> free_zeros;  // bits that always answer 0, query cost 0

    double R_st = 0;
    UnitFlow theta;
    bool unique_path = false;
    std::optional<Edge> planted;
    std::optional<Edge> bridge;
    std::vector<Edge> cut;

    // series-parallel extras
    std::optional<SpTerm> term;
    std::optional<SpTerm> dual_term;

    InputOracle oracle() const {
        InputOracle o;
        o.x = x;
        o.assoc = assoc;
        for (int i : free_ones) o.free_bits.insert(i);
        for (int i : free_zeros) o.free_bits.insert(i);
        return o;
    }
    SubgraphView view() const { return subgraph(graph, assoc, x); }
};

namespace detail {

inline void verify_truth(FamilyInstance& inst, bool expect_connected = true) {
    SubgraphView v = inst.view();
    if (!expect_connected) return;
    inst.R_st = effective_resistance(v);
    if (!std::isfinite(inst.R_st)) throw GraphError(inst.family + ": terminals disconnected");
    inst.theta = optimal_unit_flow(v);
}

inline FamilyInstance from_graph(std::string family, Graph g) {
    FamilyInstance inst;
    inst.family = std::move(family);
    inst.graph = std::move(g);
    inst.assoc = EdgeAssociation::singletons(inst.graph);
    inst.x.assign(inst.assoc.m, 1);
    return inst;
}

}  // namespace detail

/// Path of length L from s=0 to t=L; optionally padded with isolated vertices
/// up to total_n (so scaling runs can vary L at fixed vertex count).
inline FamilyInstance gen_path(int L, int total_n = 0) {
    if (L < 1) throw GraphError("gen_path: L >= 1");
    int n = std::max(L + 1, total_n);
    std::vector<Edge> es;
    for (int i = 0; i < L; ++i) es.push_back({i, i + 1});
    FamilyInstance inst = detail::from_graph("path", build_graph(n, es, 0, L));
    inst.unique_path = true;
    detail::verify_truth(inst);
    return inst;
}

/// Vertex-disjoint st-paths of the given lengths between s=0 and t=1.
inline FamilyInstance gen_parallel_paths(const std::vector<int>& lengths) {
    if (lengths.empty()) throw GraphError("gen_parallel_paths: need lengths");
    int ones = 0;
    for (int L : lengths) {
        if (L < 1) throw GraphError("gen_parallel_paths: lengths >= 1");
        if (L == 1) ++ones;
    }
    if (ones > 1) throw GraphError("gen_parallel_paths: at most one direct edge");
    int next = 2;
    std::vector<Edge> es;
    for (int L : lengths) {
        int prev = 0;
        for (int i = 1; i < L; ++i) {
            es.push_back(canonical_edge(prev, next));
            prev = next++;
        }
        es.push_back(canonical_edge(prev, 1));
    }
    FamilyInstance inst =
        detail::from_graph("parallel_paths", build_graph(next, es, 0, 1));
    inst.unique_path = lengths.size() == 1;
    detail::verify_truth(inst);
    return inst;
}

/// Unique st-path of length L on n vertices; the remaining vertices carry
/// random clutter edges in components disconnected from the path.
inline FamilyInstance gen_unique_path_clutter(int L, int n, std::uint64_t seed) {
    if (L < 1 || n < L + 1) throw GraphError("gen_unique_path_clutter: need n >= L+1");
    std::mt19937_64 rng(seed);
    std::vector<Edge> es;
    for (int i = 0; i < L; ++i) es.push_back({i, i + 1});
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int u = L + 1; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (unif(rng) < 0.4) es.push_back({u, v});
    FamilyInstance inst =
        detail::from_graph("unique_path_clutter", build_graph(n, es, 0, L));
    inst.unique_path = true;
    detail::verify_truth(inst);
    if (enumerate_st_paths(inst.view(), n).size() != 1)
        throw GraphError("gen_unique_path_clutter: path not unique");
    return inst;
}

/// The hard instance for edge finding: two arms from each terminal ending in
/// fan hubs, a fan of 2^((l-1)/2) vertices per hub, and one planted middle
/// edge selected by sigma_star = (b, sigma, sigma'). Structural edges are
/// free 1-bits; absent pairs are materialized as free 0-bits; only the
/// 2^l potential middle edges cost queries.
inline FamilyInstance gen_lower_bound_family(int ell, int L,
                                             const std::vector<int>& sigma_star) {
    if (ell < 3 || ell % 2 == 0) throw GraphError("gen_lower_bound_family: ell odd, >= 3");
    if (L < 3 || L % 2 == 0) throw GraphError("gen_lower_bound_family: L odd, >= 3");
    if ((int)sigma_star.size() != ell)
        throw GraphError("gen_lower_bound_family: sigma_star length != ell");
    int half_bits = (ell - 1) / 2;
    int fan = 1 << half_bits;
    int arm = (L - 3) / 2;

    // vertex layout: s=0, t=1, then per side b: arm vertices (last is the hub,
    // or the terminal itself when arm=0), then the four fans
    int next = 2;
    int s = 0, t = 1;
    int hub_s[2], hub_t[2];
    std::vector<Edge> always;
    auto lay_arm = [&](int from, int& hub) {
        int prev = from;
        for (int i = 0; i < arm; ++i) {
            always.push_back(canonical_edge(prev, next));
            prev = next++;
        }
        hub = prev;
    };
    for (int b = 0; b < 2; ++b) lay_arm(s, hub_s[b]);
    for (int b = 0; b < 2; ++b) lay_arm(t, hub_t[b]);
    std::vector<std::vector<int>> fan_s(2), fan_t(2);
    for (int b = 0; b < 2; ++b)
        for (int i = 0; i < fan; ++i) {
            fan_s[b].push_back(next);
            always.push_back(canonical_edge(hub_s[b], next++));
        }
    for (int b = 0; b < 2; ++b)
        for (int i = 0; i < fan; ++i) {
            fan_t[b].push_back(next);
            always.push_back(canonical_edge(hub_t[b], next++));
        }
    int n = next;

    // potential middle edges, indexed by (b, sigma, sigma')
    std::vector<Edge> middles;
    std::vector<int> middle_bits;
    int b_star = sigma_star[0];
    int sig = 0, sigp = 0;
    for (int i = 0; i < half_bits; ++i) sig = 2 * sig + sigma_star[1 + i];
    for (int i = 0; i < half_bits; ++i) sigp = 2 * sigp + sigma_star[1 + half_bits + i];
    for (int b = 0; b < 2; ++b)
        for (int i = 0; i < fan; ++i)
            for (int j = 0; j < fan; ++j) {
                middles.push_back(canonical_edge(fan_s[b][i], fan_t[b][j]));
                middle_bits.push_back(b == b_star && i == sig && j == sigp ? 1 : 0);
            }
    Edge planted = canonical_edge(fan_s[b_star][sig], fan_t[b_star][sigp]);

    std::set<Edge> used(always.begin(), always.end());
    for (auto e : middles) used.insert(e);
    std::vector<Edge> nevers;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (!used.count({u, v})) nevers.push_back({u, v});

    std::vector<Edge> all = always;
    all.insert(all.end(), middles.begin(), middles.end());
    all.insert(all.end(), nevers.begin(), nevers.end());
    FamilyInstance inst =
        detail::from_graph("lower_bound", build_graph(n, all, s, t));
    // assign bits by edge identity (build_graph sorts edges)
    inst.x.assign(inst.assoc.m, 0);
    for (auto e : always) {
        int k = inst.graph.edge_index(e.first, e.second);
        inst.x[k] = 1;
        inst.free_ones.insert(k);
    }
    for (size_t i = 0; i < middles.size(); ++i) {
        int k = inst.graph.edge_index(middles[i].first, middles[i].second);
        inst.x[k] = middle_bits[i];
    }
    for (auto e : nevers)
        inst.free_zeros.insert(inst.graph.edge_index(e.first, e.second));
    inst.unique_path = true;
    inst.planted = planted;
    detail::verify_truth(inst);
    if (enumerate_st_paths(inst.view(), n).size() != 1)
        throw GraphError("gen_lower_bound_family: path not unique");
    return inst;
}

namespace detail {

/// Pairing-model random d-regular graph on the given vertices; returns
/// nullopt when the pairing collapses (loop or duplicate edge).
inline std::optional<std::vector<Edge>> pair_regular(const std::vector<int>& verts, int d,
                                                     std::mt19937_64& rng) {
    std::vector<int> stubs;
    for (int v : verts)
        for (int i = 0; i < d; ++i) stubs.push_back(v);
    std::shuffle(stubs.begin(), stubs.end(), rng);
    std::set<Edge> es;
    for (size_t i = 0; i < stubs.size(); i += 2) {
        int u = stubs[i], v = stubs[i + 1];
        if (u == v) return std::nullopt;
        if (!es.insert(canonical_edge(u, v)).second) return std::nullopt;
    }
    return std::vector<Edge>(es.begin(), es.end());
}

inline double algebraic_connectivity(int n, const std::vector<int>& verts,
                                     const std::vector<Edge>& es) {
    int k = (int)verts.size();
    std::vector<int> pos(n, -1);
    for (int i = 0; i < k; ++i) pos[verts[i]] = i;
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(k, k);
    for (auto [u, v] : es) {
        int i = pos[u], j = pos[v];
        L(i, i) += 1;
        L(j, j) += 1;
        L(i, j) -= 1;
        L(j, i) -= 1;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(L);
    return solver.eigenvalues()[1];
}

}  // namespace detail

/// Two random d-regular halves joined by a single bridge edge; rejection
/// sampling enforces simplicity and algebraic connectivity of each half.
inline FamilyInstance gen_expander_bridge(int n, int d, std::uint64_t seed,
                                          double min_lambda2 = 0.2) {
    if (n % 2 != 0 || d < 3 || (d * (n / 2)) % 2 != 0 || n / 2 <= d)
        throw GraphError("gen_expander_bridge: infeasible (n even, d >= 3, d*(n/2) even)");
    std::mt19937_64 rng(seed);
    std::vector<int> left, right;
    for (int v = 0; v < n / 2; ++v) left.push_back(v);
    for (int v = n / 2; v < n; ++v) right.push_back(v);
    auto sample_half = [&](const std::vector<int>& verts) {
        for (int tries = 0; tries < 100000; ++tries) {
            auto es = detail::pair_regular(verts, d, rng);
            if (!es) continue;
            if (detail::algebraic_connectivity(n, verts, *es) < min_lambda2) continue;
            return *es;
        }
        throw GraphError("gen_expander_bridge: rejection sampling exhausted");
    };
    std::vector<Edge> es = sample_half(left);
    auto er = sample_half(right);
    es.insert(es.end(), er.begin(), er.end());
    int bu = left[std::uniform_int_distribution<size_t>(0, left.size() - 1)(rng)];
    int bv = right[std::uniform_int_distribution<size_t>(0, right.size() - 1)(rng)];
    Edge bridge = canonical_edge(bu, bv);
    es.push_back(bridge);
    FamilyInstance inst =
        detail::from_graph("expander_bridge", build_graph(n, es, 0, n / 2));
    inst.bridge = bridge;
    inst.cut = {bridge};
    detail::verify_truth(inst);
    double th = inst.theta.theta(bu, bv);
    if (std::abs(std::abs(th) - 1.0) > 1e-9)
        throw GraphError("gen_expander_bridge: bridge flow != 1");
    return inst;
}

/// Random series-parallel composition with its dual term recorded.
inline FamilyInstance gen_series_parallel(std::uint64_t term_seed, int leaves) {
    SpTerm term = random_sp_term(leaves, term_seed);
    SpRealization real = sp_compose(term);
    FamilyInstance inst = detail::from_graph("series_parallel", real.graph);
    inst.term = term;
    inst.dual_term = sp_dual(term);
    detail::verify_truth(inst);
    return inst;
}

}  // namespace pes
