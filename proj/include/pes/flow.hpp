#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "pes/graph.hpp"

namespace pes {

constexpr double kRankCutoff = 1e-10;  // relative singular-value cutoff

/// Moore-Penrose pseudoinverse via spectral decomposition (symmetric input).
inline Eigen::MatrixXd sym_pseudoinverse(const Eigen::MatrixXd& M) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    const auto& vals = es.eigenvalues();
    double vmax = 0;
    for (int i = 0; i < vals.size(); ++i) vmax = std::max(vmax, std::abs(vals[i]));
    Eigen::VectorXd inv(vals.size());
    for (int i = 0; i < vals.size(); ++i)
        inv[i] = (std::abs(vals[i]) > kRankCutoff * vmax) ? 1.0 / vals[i] : 0.0;
    return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

/// L = D - A of G(x), unit edge weights.
inline Eigen::MatrixXd graph_laplacian(const SubgraphView& view) {
    int n = view.n();
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    for (auto [u, v] : view.present_edges()) {
        L(u, u) += 1;
        L(v, v) += 1;
        L(u, v) -= 1;
        L(v, u) -= 1;
    }
    return L;
}

inline double kInfResistance() { return std::numeric_limits<double>::infinity(); }

inline double effective_resistance(const SubgraphView& view, int a, int b) {
    if (a == b) return 0.0;
    if (!classical_st_connected(view, a, b)) return kInfResistance();
    Eigen::MatrixXd Lp = sym_pseudoinverse(graph_laplacian(view));
    int n = view.n();
    Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
    d[a] = 1;
    d[b] = -1;
    return d.dot(Lp * d);
}

inline double effective_resistance(const SubgraphView& view) {
    return effective_resistance(view, view.parent->s, view.parent->t);
}

/// Antisymmetric flow on directed edges, keyed by (u,v) with u < v.
struct UnitFlow {
    std::map<Edge, double> theta_fwd;  // theta(min,max); theta(max,min) = -theta(min,max)

    double theta(int u, int v) const {
        auto it = theta_fwd.find(canonical_edge(u, v));
        if (it == theta_fwd.end()) return 0.0;
        return u < v ? it->second : -it->second;
    }
    double energy() const {
        double j = 0;
        for (const auto& [_, th] : theta_fwd) j += th * th;
        return j;  // (1/2) * sum over both directions
    }
};

/// Minimum-energy unit st-flow: theta(u,v) = phi(u) - phi(v), phi = L+ (e_s - e_t).
inline UnitFlow optimal_unit_flow(const SubgraphView& view, int a, int b) {
    if (!classical_st_connected(view, a, b))
        throw GraphError("optimal_unit_flow: terminals not connected");
    int n = view.n();
    Eigen::MatrixXd Lp = sym_pseudoinverse(graph_laplacian(view));
    Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
    d[a] = 1;
    d[b] = -1;
    Eigen::VectorXd phi = Lp * d;
    UnitFlow f;
    for (auto [u, v] : view.present_edges()) f.theta_fwd[{u, v}] = phi[u] - phi[v];
    return f;
}

inline UnitFlow optimal_unit_flow(const SubgraphView& view) {
    return optimal_unit_flow(view, view.parent->s, view.parent->t);
}

/// q(e) = theta*(e)^2 / (2R) per directed edge.
struct FlowDistribution {
    std::map<Edge, double> q_fwd;  // per canonical edge; each direction carries q_fwd/2... no:
    // q_fwd[e] is the probability of ONE direction; both directions of an
    // undirected edge have equal mass, so undirected mass is 2*q_fwd[e].

    double q_directed(int u, int v) const {
        auto it = q_fwd.find(canonical_edge(u, v));
        return it == q_fwd.end() ? 0.0 : it->second;
    }
    double q_undirected(int u, int v) const { return 2.0 * q_directed(u, v); }
    double total() const {
        double s = 0;
        for (const auto& [_, p] : q_fwd) s += 2 * p;
        return s;
    }
};

inline FlowDistribution edge_distribution(const UnitFlow& flow, double R) {
    if (!(R > 0)) throw GraphError("edge_distribution: R must be positive");
    FlowDistribution d;
    for (const auto& [e, th] : flow.theta_fwd) d.q_fwd[e] = th * th / (2.0 * R);
    return d;
}

struct WalkEstimate {
    double mean = 0;
    double stderr_ = 0;
};

/// Monte Carlo check of the crossing-count identity: theta(u,v) equals the
/// expected number of u->v moves minus v->u moves of a walker from s absorbed
/// at t.
inline WalkEstimate random_walk_flow(const SubgraphView& view, int u, int v,
                                     int trials, std::uint64_t seed) {
    auto adj = view.adjacency();
    int s = view.parent->s, t = view.parent->t;
    std::mt19937_64 rng(seed);
    double sum = 0, sumsq = 0;
    for (int i = 0; i < trials; ++i) {
        int pos = s;
        long diff = 0;
        while (pos != t) {
            const auto& nb = adj[pos];
            int nxt = nb[std::uniform_int_distribution<size_t>(0, nb.size() - 1)(rng)];
            if (pos == u && nxt == v) diff++;
            if (pos == v && nxt == u) diff--;
            pos = nxt;
        }
        sum += diff;
        sumsq += double(diff) * diff;
    }
    WalkEstimate e;
    e.mean = sum / trials;
    double var = (sumsq - sum * sum / trials) / std::max(1, trials - 1);
    e.stderr_ = std::sqrt(std::max(0.0, var) / trials);
    return e;
}

}  // namespace pes
