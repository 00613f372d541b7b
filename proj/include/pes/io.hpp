#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "pes/flow.hpp"
#include "pes/graph.hpp"
#include "pes/quantum.hpp"

namespace pes {

using nlohmann::json;

struct GraphSpec {
    Graph graph;
    EdgeAssociation assoc;
    std::vector<int> x;
    std::set<int> free_ones;
    std::set<int> free_zeros;

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

/// `{"n":..,"s":..,"t":..,"edges":[[u,v,bit],..],"x":"01..","free_ones":[..],"free_zeros":[..]}`
/// Edge order in the file defines nothing; the canonical sorted order of the
/// built graph defines the directed-basis order.
inline json graph_to_json(const GraphSpec& gs) {
    json j;
    j["n"] = gs.graph.n;
    j["s"] = gs.graph.s;
    j["t"] = gs.graph.t;
    json edges = json::array();
    // recover the bit of each edge from the association
    std::vector<int> bit_of(gs.graph.edges.size(), -1);
    for (int b = 0; b < gs.assoc.m; ++b)
        for (int e : gs.assoc.assoc[b]) bit_of[e] = b;
    for (size_t k = 0; k < gs.graph.edges.size(); ++k)
        edges.push_back({gs.graph.edges[k].first, gs.graph.edges[k].second, bit_of[k]});
    j["edges"] = edges;
    std::string xs;
    for (int b : gs.x) xs += b ? '1' : '0';
    j["x"] = xs;
    j["free_ones"] = gs.free_ones;
    j["free_zeros"] = gs.free_zeros;
    return j;
}

inline GraphSpec graph_from_json(const json& j) {
    GraphSpec gs;
    int n = j.at("n").get<int>();
    int s = j.at("s").get<int>();
    int t = j.at("t").get<int>();
    std::vector<Edge> es;
    std::vector<std::pair<Edge, int>> edge_bits;
    int max_bit = -1;
    for (const auto& e : j.at("edges")) {
        int u = e.at(0).get<int>();
        int v = e.at(1).get<int>();
        int bit = e.size() > 2 ? e.at(2).get<int>() : -1;
        es.push_back(canonical_edge(u, v));
        edge_bits.push_back({canonical_edge(u, v), bit});
        max_bit = std::max(max_bit, bit);
    }
    gs.graph = build_graph(n, es, s, t);
    if (max_bit < 0) {
        // no explicit bits: singleton association in canonical edge order
        gs.assoc = EdgeAssociation::singletons(gs.graph);
        for (auto& [e, b] : edge_bits) b = gs.graph.edge_index(e.first, e.second);
    } else {
        gs.assoc.m = max_bit + 1;
        gs.assoc.assoc.resize(gs.assoc.m);
        for (auto [e, b] : edge_bits) {
            if (b < 0) throw GraphError("graph json: mixed explicit/implicit bits");
            gs.assoc.assoc[b].push_back(gs.graph.edge_index(e.first, e.second));
        }
        gs.assoc.validate(gs.graph);
    }
    if (j.contains("x") && j.at("x").is_string()) {
        std::string xs = j.at("x").get<std::string>();
        if ((int)xs.size() != gs.assoc.m) throw GraphError("graph json: x length mismatch");
        for (char c : xs) {
            if (c != '0' && c != '1') throw GraphError("graph json: x must be 0/1");
            gs.x.push_back(c == '1');
        }
    } else {
        gs.x.assign(gs.assoc.m, 1);
    }
    if (j.contains("free_ones"))
        for (int b : j.at("free_ones")) gs.free_ones.insert(b);
    if (j.contains("free_zeros"))
        for (int b : j.at("free_zeros")) gs.free_zeros.insert(b);
    return gs;
}

inline GraphSpec graph_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GraphError("cannot open graph file: " + path);
    json j;
    in >> j;
    return graph_from_json(j);
}

inline std::string directed_key(int u, int v) {
    Edge e = canonical_edge(u, v);
    int dir = u < v ? 0 : 1;
    std::ostringstream os;
    os << e.first << "," << e.second << ":" << dir;
    return os.str();
}

/// `{"theta":{"min,max:dir":..},"R":..,"q":{"min,max:dir":..}}`
inline json flow_to_json(const UnitFlow& flow, double R, const FlowDistribution& q) {
    json j;
    json th = json::object();
    json qj = json::object();
    for (const auto& [e, v] : flow.theta_fwd) {
        th[directed_key(e.first, e.second)] = v;
        th[directed_key(e.second, e.first)] = -v;
    }
    for (const auto& [e, v] : q.q_fwd) {
        qj[directed_key(e.first, e.second)] = v;
        qj[directed_key(e.second, e.first)] = v;
    }
    j["theta"] = th;
    j["R"] = R;
    j["q"] = qj;
    return j;
}

/// Basis-labeled amplitudes of a state over the directed-edge basis, fixed
/// edge order; the trailing entry is the extra |0^> coordinate when present.
inline json witness_to_json(const Graph& g, const Eigen::VectorXcd& state) {
    json j = json::array();
    int dim_h = 2 * (int)g.edges.size();
    for (int i = 0; i < state.size(); ++i) {
        json entry;
        if (i < dim_h) {
            auto [u, v] = g.directed_endpoints(i);
            entry["basis"] = std::to_string(u) + "->" + std::to_string(v);
        } else {
            entry["basis"] = "0_hat";
        }
        entry["re"] = state[i].real();
        entry["im"] = state[i].imag();
        j.push_back(entry);
    }
    return j;
}

/// List of (eigenphase, |<0^|lambda>|^2) pairs.
inline json spectrum_to_json(const ReflectionUnitary& u) {
    json j = json::array();
    Eigen::VectorXcd zero_hat = u.space.zero_hat_state();
    for (int i = 0; i < u.phases.size(); ++i)
        j.push_back({u.phases[i], std::norm(u.vecs.col(i).dot(zero_hat))});
    return j;
}

inline json ledger_to_json(const QueryLedger& ledger) {
    json j;
    json breakdown = json::object();
    for (const auto& [name, e] : ledger.breakdown)
        breakdown[name] = {{"exact", e.exact}, {"modeled", e.modeled}};
    j["breakdown"] = breakdown;
    j["total_exact"] = ledger.total_exact();
    j["total_modeled"] = ledger.total_modeled();
    j["grand_total"] = ledger.grand_total();
    return j;
}

}  // namespace pes
