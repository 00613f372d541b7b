#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "pes/flow.hpp"
#include "pes/graph.hpp"
#include "pes/quantum.hpp"
#include "pes/span_program.hpp"

namespace pes {

/// Tunable constants of the modeled subroutines plus the failure-injection
/// switch. Scaling checks are slope-based, so the constants cancel there.
struct RunConstants {
    double c_minus = 2.0;  // negative-witness bound coefficient
    double c_pd = 1.0;     // path detection cost scale
    double c_we = 1.0;     // witness size estimation cost scale
    double c_iqae = 10.0;  // amplitude estimation cost scale
    bool inject_failures = true;
};

/// Per-(program, input) cache of reflection unitaries keyed by alpha, plus the
/// positive witness size. Valid only while the program and input are fixed.
struct UnitaryCache {
    std::map<double, ReflectionUnitary> by_alpha;
    std::optional<double> w_plus;

    const ReflectionUnitary& get(const SpanProgram& p, const std::vector<int>& x,
                                 double alpha) {
        auto it = by_alpha.find(alpha);
        if (it == by_alpha.end()) it = by_alpha.emplace(alpha, build_U(p, x, alpha)).first;
        return it->second;
    }
    double witness_size(const SpanProgram& p, const std::vector<int>& x) {
        if (!w_plus) w_plus = positive_witness(p, x).w_plus;
        return *w_plus;
    }
};

struct WitnessGenerationResult {
    bool success = false;
    Eigen::VectorXcd state;  // extended space, normalized, |0^> component ~0
    double alpha = 0;        // the alpha in force when generation ran
    bool probing_broke = false;
    bool probing_clean = false;  // broke without the amplitude-estimation failure branch
    double a0_truth = 0;         // 1/(1 + w_+/alpha^2) at the final alpha
    double w_plus = 0;
    bool probing_invariant_ok = true;  // w_+/a^2 in [1/2,2] => Pr[0_B] in [16/48, 33/48]
};

/// Witness state generation. Probing stage doubles alpha until amplitude
/// estimation sees a balanced zero-outcome probability; generation stage
/// repeats phase estimation + the (I - |0^><0^|) (x) |0><0| measurement.
/// Phase-estimation costs are charged exactly, amplitude-estimation costs as
/// modeled, both to the oracle's ledger.
inline WitnessGenerationResult witness_generation(const SpanProgram& p, InputOracle& oracle,
                                                  double eps, double delta,
                                                  const WitnessBounds& bounds,
                                                  std::mt19937_64& rng,
                                                  const RunConstants& c = {},
                                                  UnitaryCache* cache = nullptr) {
    if (!(eps > 0 && eps < 1) || !(delta > 0 && delta < 1))
        throw GraphError("witness_generation: eps, delta in (0,1)");
    UnitaryCache local;
    UnitaryCache& uc = cache ? *cache : local;
    const std::vector<int>& x = oracle.snapshot();

    double eps_p = std::min(eps, 1.0 / 96.0);
    double ww = bounds.W_plus * bounds.W_minus_tilde;
    int T = (int)std::ceil(std::log2(std::sqrt(ww)));
    double pfail = std::min(delta / std::log2(ww), 1.0 / std::sqrt(ww));

    WitnessGenerationResult res;
    res.w_plus = uc.witness_size(p, x);

    ExtendedSpace space{p.dim_h};
    Eigen::VectorXcd psi0 = space.zero_hat_state();

    // Probing stage
    double alpha = 1.0 / std::sqrt(bounds.W_minus_tilde);
    for (int i = 0; i <= T; ++i) {
        alpha = std::ldexp(1.0, i) / std::sqrt(bounds.W_minus_tilde);
        const ReflectionUnitary& u = uc.get(p, x, alpha);
        double theta = std::sqrt(eps_p / (alpha * alpha * bounds.W_minus_tilde));
        auto plan = plan_phase_estimation(u, theta, eps_p);
        double truth = zero_outcome_probability(u, plan, psi0);
        double ratio = res.w_plus / (alpha * alpha);
        if (ratio >= 0.5 && ratio <= 2.0 &&
            !(truth >= 16.0 / 48.0 && truth <= 33.0 / 48.0))
            res.probing_invariant_ok = false;
        IqaeResult est = iqae_estimate(truth, 1.0 / 48.0, pfail, rng, c.c_iqae,
                                       c.inject_failures);
        oracle.ledger.charge_modeled("iqae",
                                     (double)est.experiments * (double)plan.oracle_cost());
        if (est.estimate >= 15.0 / 48.0 && est.estimate <= 35.0 / 48.0) {
            res.probing_broke = true;
            res.probing_clean = !est.failed;
            break;
        }
    }
    res.alpha = alpha;
    res.a0_truth = 1.0 / (1.0 + res.w_plus / (alpha * alpha));

    // State generation stage
    const ReflectionUnitary& u = uc.get(p, x, alpha);
    double theta = std::sqrt(eps_p / (alpha * alpha * bounds.W_minus_tilde));
    auto plan = plan_phase_estimation(u, theta, eps_p);
    int attempts = std::max(1, (int)std::ceil(std::log2(1.0 / delta)));
    for (int j = 0; j < attempts; ++j) {
        oracle.ledger.charge_exact("phase_estimation", plan.oracle_cost());
        Eigen::VectorXcd filtered = phase_filtered(u, plan, psi0);
        Eigen::VectorXcd w_hat = filtered;
        w_hat[space.zero_hat()] = 0.0;
        double pr_m = w_hat.squaredNorm();
        if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < pr_m) {
            res.success = true;
            res.state = w_hat / std::sqrt(pr_m);
            return res;
        }
    }
    return res;
}

struct EdgeSample {
    bool success = false;
    int directed_index = -1;
    int u = -1, v = -1;
    WitnessGenerationResult wg;
};

/// Measures a generated witness state in the directed-edge standard basis;
/// on witness-generation failure, the failure propagates.
inline EdgeSample edge_finder(InputOracle& oracle, double p, const Graph& g, int s, int t,
                              std::mt19937_64& rng, const RunConstants& c = {},
                              UnitaryCache* cache = nullptr) {
    double eps = p * p;
    double delta = p;
    Graph gst = g;
    gst.s = s;
    gst.t = t;
    SpanProgram prog = build_stconn_program(gst, oracle.assoc);
    WitnessBounds bounds = default_bounds_stconn(g.n, c.c_minus);
    EdgeSample out;
    out.wg = witness_generation(prog, oracle, eps, delta, bounds, rng, c, cache);
    if (!out.wg.success) return out;
    // sample a directed-edge index from |amplitude|^2 over the H part
    Eigen::VectorXd probs(prog.dim_h);
    for (int i = 0; i < prog.dim_h; ++i) probs[i] = std::norm(out.wg.state[i]);
    double total = probs.sum();
    double r = std::uniform_real_distribution<double>(0.0, total)(rng);
    int idx = prog.dim_h - 1;
    for (int i = 0; i < prog.dim_h; ++i) {
        r -= probs[i];
        if (r <= 0) {
            idx = i;
            break;
        }
    }
    out.success = true;
    out.directed_index = idx;
    auto [eu, ev] = gst.directed_endpoints(idx);
    out.u = eu;
    out.v = ev;
    return out;
}

/// Lockstep-executable modeled subroutine: the answer is fixed at
/// construction, revealed after the budgeted number of unit-cost steps.
struct SteppedSubroutine {
    std::string name;
    std::int64_t remaining = 0;
    bool done = false;
    bool value = false;
    InputOracle* oracle = nullptr;

    void step() {
        if (done) return;
        oracle->ledger.charge_modeled(name, 1.0);
        if (--remaining <= 0) done = true;
    }
};

/// Modeled st-connectivity detection on a subgraph view: classical truth,
/// flipped with probability delta, behind the cited algorithm's query budget.
inline SteppedSubroutine path_detection_stepper(InputOracle& oracle, const SubgraphView& gp,
                                                int a, int b, double delta,
                                                std::mt19937_64& rng,
                                                const RunConstants& c = {}) {
    SteppedSubroutine s;
    s.name = "path_detection";
    s.oracle = &oracle;
    bool truth = classical_st_connected(gp, a, b);
    double n = gp.n();
    double steps;
    if (truth) {
        double R = (a == b) ? 0.0 : effective_resistance(gp, a, b);
        if (R <= 0) {
            steps = 1;
        } else {
            steps = std::ceil(c.c_pd * n * std::sqrt(R) *
                              std::log(std::max(std::exp(1.0), n / (R * delta))));
        }
    } else {
        steps = std::ceil(c.c_pd * std::pow(n, 1.5) * std::log(1.0 / delta));
    }
    s.remaining = std::max<std::int64_t>(1, (std::int64_t)steps);
    s.value = truth;
    if (c.inject_failures &&
        std::uniform_real_distribution<double>(0.0, 1.0)(rng) < delta)
        s.value = !truth;
    return s;
}

/// Modeled effective-resistance estimator: R(1 + U(-eps, eps)) with
/// probability 1 - delta, else U(0, n); cost charged as modeled.
inline double witness_size_est(InputOracle& oracle, const SubgraphView& g, int a, int b,
                               double eps, double delta, std::mt19937_64& rng,
                               const RunConstants& c = {}) {
    double R = (a == b) ? 0.0 : effective_resistance(g, a, b);
    double n = g.n();
    double cost;
    if (std::isfinite(R)) {
        cost = std::ceil(c.c_we * std::sqrt(std::max(R, 1.0) * n * n / std::pow(eps, 3)) *
                         std::log(1.0 / delta));
    } else {
        cost = std::ceil(c.c_we * std::pow(n / eps, 1.5) * std::log(1.0 / delta));
    }
    oracle.ledger.charge_modeled("witness_size_est", std::max(1.0, cost));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    if (c.inject_failures && unif(rng) < delta)
        return std::uniform_real_distribution<double>(0.0, n)(rng);
    double noise = c.inject_failures
                       ? std::uniform_real_distribution<double>(-eps, eps)(rng)
                       : 0.0;
    return R * (1.0 + noise);
}

struct PathResult {
    bool success = false;
    std::vector<Edge> edges;                     // unordered (single path finder)
    std::vector<std::pair<int, int>> sequence;   // ordered (general path finder)
};

namespace detail {

/// View of a derived graph (same vertex ids, subset of edges) restricted to
/// the edges present in the parent's input subgraph.
inline SubgraphView restrict_view(const Graph& derived, const std::set<Edge>& present) {
    SubgraphView v;
    v.parent = &derived;
    v.present.assign(derived.edges.size(), 0);
    for (size_t k = 0; k < derived.edges.size(); ++k)
        if (present.count(derived.edges[k])) v.present[k] = 1;
    return v;
}

inline std::set<Edge> present_edge_set(const SubgraphView& v) {
    auto es = v.present_edges();
    return std::set<Edge>(es.begin(), es.end());
}

struct SinglePathCtx {
    InputOracle* oracle = nullptr;
    const Graph* g = nullptr;
    std::set<Edge> present;  // E(x)
    double p = 0;
    RunConstants consts;
    std::mt19937_64* rng = nullptr;
    int calls = 0;
    int call_cap = 0;
};

inline bool single_path_rec(SinglePathCtx& ctx, int s, int t, std::vector<Edge>& out) {
    if (++ctx.calls > ctx.call_cap) return false;
    const Graph& g = *ctx.g;
    // base cases
    if (s == t) return true;
    if (g.has_edge(s, t) && ctx.present.count(canonical_edge(s, t))) {
        out.push_back(canonical_edge(s, t));
        return true;
    }
    int n = g.n;
    double eps1 = 1.0 / std::log2(std::max(n, 3));
    int ell = (int)std::ceil(2.0 * std::log2(std::pow((double)n, 5) / ctx.p) / eps1);

    // candidate collection
    Graph gst = g;
    gst.s = s;
    gst.t = t;
    UnitaryCache cache;
    std::vector<std::pair<int, int>> cands;  // directed, deduplicated, in arrival order
    std::set<std::pair<int, int>> seen;
    for (int i = 0; i < ell; ++i) {
        EdgeSample e = edge_finder(*ctx.oracle, eps1, g, s, t, *ctx.rng, ctx.consts, &cache);
        if (!e.success) continue;
        if (!ctx.present.count(canonical_edge(e.u, e.v))) continue;  // not in E(x)
        for (auto d : {std::pair<int, int>{e.u, e.v}, std::pair<int, int>{e.v, e.u}})
            if (seen.insert(d).second) cands.push_back(d);
    }
    double delta = ctx.p / ((double)ell * std::pow((double)n, 5));

    // lockstep path detection over all candidates
    struct Cand {
        std::pair<int, int> uv;
        SteppedSubroutine su;  // s -> u in G - {u,v}
        SteppedSubroutine vt;  // v -> t in G - {u,v}
        Graph minus;           // owns the derived graph the views point into
        bool checked = false;
    };
    std::vector<std::unique_ptr<Cand>> live;
    for (auto [u, v] : cands) {
        auto cd = std::make_unique<Cand>();
        cd->uv = {u, v};
        cd->minus = remove_edges(g, {canonical_edge(u, v)});
        SubgraphView view = restrict_view(cd->minus, ctx.present);
        cd->su = path_detection_stepper(*ctx.oracle, view, s, u, delta, *ctx.rng, ctx.consts);
        cd->vt = path_detection_stepper(*ctx.oracle, view, v, t, delta, *ctx.rng, ctx.consts);
        live.push_back(std::move(cd));
    }

    int L = bfs_distance(restrict_view(g, ctx.present), s, t);  // recursion metadata
    double eps2 = std::sqrt(eps1);
    double eps3 = 2.0 * std::sqrt(eps1);
    std::optional<std::pair<int, int>> star;
    bool any_running = !live.empty();
    while (!star && any_running) {
        any_running = false;
        for (auto& cd : live) {
            bool was_done = cd->su.done && cd->vt.done;
            cd->su.step();
            cd->vt.step();
            if (!(cd->su.done && cd->vt.done)) {
                any_running = true;
                continue;
            }
            if (was_done || cd->checked) continue;
            cd->checked = true;
            if (!(cd->su.value && cd->vt.value)) continue;
            SubgraphView gview = restrict_view(g, ctx.present);
            double k = witness_size_est(*ctx.oracle, gview, s, cd->uv.first, eps2, delta,
                                        *ctx.rng, ctx.consts);
            if (std::abs(k - L / 2.0) <= eps3 * L) {
                star = cd->uv;
                break;
            }
        }
    }
    if (!star) return false;

    auto [us, vs] = *star;
    out.push_back(canonical_edge(us, vs));
    if (!single_path_rec(ctx, s, us, out)) return false;
    return single_path_rec(ctx, vs, t, out);
}

}  // namespace detail

/// Divide-and-conquer unique-path reconstruction: sample candidate edges,
/// confirm one lies on the path via lockstep detection on the edge-deleted
/// graph, split at it, recurse on both sides in the same graph.
inline PathResult single_path_finder(InputOracle& oracle, double p, const Graph& g, int s,
                                     int t, std::mt19937_64& rng,
                                     const RunConstants& c = {}) {
    detail::SinglePathCtx ctx;
    ctx.oracle = &oracle;
    ctx.g = &g;
    ctx.present = detail::present_edge_set(subgraph(g, oracle.assoc, oracle.snapshot()));
    ctx.p = p;
    ctx.consts = c;
    ctx.rng = &rng;
    ctx.call_cap = 2 * g.n;
    PathResult res;
    res.success = detail::single_path_rec(ctx, s, t, res.edges);
    if (!res.success) res.edges.clear();
    std::sort(res.edges.begin(), res.edges.end());
    res.edges.erase(std::unique(res.edges.begin(), res.edges.end()), res.edges.end());
    return res;
}

/// Group-testing path construction: bisect the terminal's neighbor edges,
/// keep the half whose restricted graph still connects s to t, peel off the
/// found first edge and recurse on the vertex-deleted graph.
inline PathResult general_path_finder(InputOracle& oracle, const Graph& g, int s, int t,
                                      double p, std::mt19937_64& rng,
                                      const RunConstants& c = {}) {
    PathResult res;
    std::set<Edge> present = detail::present_edge_set(subgraph(g, oracle.assoc, oracle.snapshot()));
    Graph cur = g;
    int a = s;
    while (true) {
        if (a == t) {
            res.success = true;
            return res;
        }
        double n = cur.n;
        double delta = p / (std::pow(n, 4) * std::max(1.0, std::log2(n)));
        // neighbor edges of a in the (current) parent graph, sorted by vertex id
        std::vector<int> nbrs;
        for (auto [u, v] : cur.edges) {
            if (u == a) nbrs.push_back(v);
            if (v == a) nbrs.push_back(u);
        }
        std::sort(nbrs.begin(), nbrs.end());
        std::vector<int> S = nbrs;
        while (S.size() > 1) {
            size_t half = (S.size() + 1) / 2;
            std::vector<int> S1(S.begin(), S.begin() + half);
            std::vector<int> S2(S.begin() + half, S.end());
            auto keep_only = [&](const std::vector<int>& keep) {
                std::set<int> ks(keep.begin(), keep.end());
                std::vector<Edge> drop;
                for (int v : nbrs)
                    if (!ks.count(v)) drop.push_back(canonical_edge(a, v));
                return remove_edges(cur, drop);
            };
            Graph g1 = keep_only(S1);
            Graph g2 = keep_only(S2);
            SubgraphView v1 = detail::restrict_view(g1, present);
            SubgraphView v2 = detail::restrict_view(g2, present);
            SteppedSubroutine d1 =
                path_detection_stepper(oracle, v1, a, t, delta, rng, c);
            SteppedSubroutine d2 =
                path_detection_stepper(oracle, v2, a, t, delta, rng, c);
            // lockstep within one query until one outputs 1
            while (true) {
                if (!d1.done) d1.step();
                if (d1.done && d1.value) break;
                if (!d2.done) d2.step();
                if (d2.done && d2.value) break;
                if (d1.done && d2.done) break;
            }
            if (d1.done && d1.value) {
                S = S1;
            } else if (d2.done && d2.value) {
                S = S2;
            } else {
                return res;  // Failure: neither detector output 1
            }
        }
        if (S.empty()) return res;
        int u = S[0];
        if (!present.count(canonical_edge(a, u))) return res;
        res.sequence.push_back({a, u});
        cur = remove_vertex(cur, a);
        a = u;
    }
}

struct CutsetResult {
    std::set<Edge> edges;
    int successful_samples = 0;
    int runs = 0;
};

/// Repeated coarse witness generation + standard-basis sampling; every edge
/// of a small-flow cut keeps enough sampling mass to be collected.
inline CutsetResult cutset_finder(InputOracle& oracle, const Graph& g, int s, int t,
                                  double r_bound, double g_bound, std::mt19937_64& rng,
                                  const RunConstants& c = {}) {
    if (!(r_bound > 0) || !(g_bound > 0)) throw GraphError("cutset_finder: bad bounds");
    double eps_cut = g_bound / (256.0 * r_bound);
    double delta = 0.25;
    int t_runs = (int)std::ceil(100.0 * (r_bound / g_bound) * (std::log((double)g.n) + 1.0));
    Graph gst = g;
    gst.s = s;
    gst.t = t;
    SpanProgram prog = build_stconn_program(gst, oracle.assoc);
    WitnessBounds bounds = default_bounds_stconn(g.n, c.c_minus);
    UnitaryCache cache;
    CutsetResult res;
    res.runs = t_runs;
    for (int i = 0; i < t_runs; ++i) {
        auto wg = witness_generation(prog, oracle, eps_cut, delta, bounds, rng, c, &cache);
        if (!wg.success) continue;
        Eigen::VectorXd probs(prog.dim_h);
        for (int k = 0; k < prog.dim_h; ++k) probs[k] = std::norm(wg.state[k]);
        double r = std::uniform_real_distribution<double>(0.0, probs.sum())(rng);
        int idx = prog.dim_h - 1;
        for (int k = 0; k < prog.dim_h; ++k) {
            r -= probs[k];
            if (r <= 0) {
                idx = k;
                break;
            }
        }
        auto [u, v] = gst.directed_endpoints(idx);
        res.edges.insert(canonical_edge(u, v));
        res.successful_samples++;
    }
    return res;
}

/// Expected samples to collect c coupons when each draw hits a fresh coupon
/// with probability at least B: sum_{j=1..c} 1/(jB).
inline double coupon_expected_samples(double B, int c) {
    if (!(B > 0 && B <= 1) || c < 1) throw GraphError("coupon_expected_samples: bad args");
    double s = 0;
    for (int j = 1; j <= c; ++j) s += 1.0 / (j * B);
    return s;
}

/// Independent walkability check for an ordered edge sequence.
inline bool is_walkable_path(const SubgraphView& view, int s, int t,
                             const std::vector<std::pair<int, int>>& seq) {
    if (seq.empty()) return s == t;
    if (seq.front().first != s || seq.back().second != t) return false;
    std::set<int> visited{s};
    int cur = s;
    for (auto [u, v] : seq) {
        if (u != cur) return false;
        if (!view.has_edge(u, v)) return false;
        if (!visited.insert(v).second) return false;
        cur = v;
    }
    return cur == t;
}

/// Checks that an unordered edge set is exactly a simple st-path.
inline bool edge_set_forms_st_path(const SubgraphView& view, int s, int t,
                                   const std::vector<Edge>& edges) {
    if (edges.empty()) return s == t;
    std::map<int, std::vector<int>> adj;
    std::set<Edge> uniq(edges.begin(), edges.end());
    if (uniq.size() != edges.size()) return false;
    for (auto [u, v] : uniq) {
        if (!view.has_edge(u, v)) return false;
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    // walk from s, consuming edges; must be degree <= 2 everywhere
    for (auto& [v, nb] : adj)
        if (nb.size() > 2) return false;
    int cur = s, prev = -1;
    size_t used = 0;
    while (true) {
        if (cur == t && used == uniq.size()) return true;
        auto it = adj.find(cur);
        if (it == adj.end()) return false;
        int nxt = -1;
        for (int v : it->second)
            if (v != prev) nxt = v;
        if (nxt < 0) return false;
        prev = cur;
        cur = nxt;
        ++used;
        if (used > uniq.size()) return false;
    }
}

}  // namespace pes
