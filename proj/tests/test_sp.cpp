#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pes/flow.hpp"
#include "pes/series_parallel.hpp"
#include "pes/trees.hpp"

using namespace pes;

TEST_CASE("single leaf realizes one edge") {
    SpRealization r = sp_compose(SpTerm::leaf());
    CHECK(r.graph.n == 2);
    CHECK(r.graph.edges.size() == 1);
    CHECK(sp_st_direction(r, 0) == std::pair<int, int>{0, 1});
}

TEST_CASE("series of three leaves is a path with R = 3") {
    SpTerm t = SpTerm::series(SpTerm::leaf(), SpTerm::series(SpTerm::leaf(), SpTerm::leaf()));
    SpRealization r = sp_compose(t);
    CHECK(r.graph.edges.size() == 3);
    CHECK(effective_resistance(full_view(r.graph)) == doctest::Approx(3.0));
}

TEST_CASE("dual swaps series and parallel") {
    SpTerm t = SpTerm::parallel(SpTerm::leaf(), SpTerm::series(SpTerm::leaf(), SpTerm::leaf()));
    SpTerm d = sp_dual(t);
    CHECK(d.kind == SpTerm::Kind::Series);
    CHECK(d.children[1].kind == SpTerm::Kind::Parallel);
    CHECK(d.leaf_count() == 3);
}

TEST_CASE("q = p * p' on realized SP graphs; dual term computes p'") {
    // triangle as leaf || (leaf ; leaf): s-t edge present, so q from flow only
    for (std::uint64_t seed : {3u, 7u, 11u, 19u}) {
        SpTerm t = random_sp_term(8, seed);
        SpRealization r = sp_compose(t);
        SubgraphView v = full_view(r.graph);
        UnitFlow f = optimal_unit_flow(v);
        FlowDistribution q = edge_distribution(f, effective_resistance(v));
        SpArcs arcs = sp_compose_arcs(t);
        SpArcs dual_arcs = sp_compose_arcs(sp_dual(t));
        for (int leaf = 0; leaf < t.leaf_count(); ++leaf) {
            auto [u, w] = r.leaf_direction[leaf];
            double p_path = sp_path_probability(arcs, leaf);
            double p_cut = count_separating_forests(v, u, w).p_prime();
            double p_dual = sp_path_probability(dual_arcs, leaf);
            CHECK(q.q_undirected(u, w) == doctest::Approx(p_path * p_cut).epsilon(1e-9));
            CHECK(p_dual == doctest::Approx(p_cut).epsilon(1e-9));
        }
    }
}

TEST_CASE("st-direction matches every enumerated st-path") {
    SpTerm t = random_sp_term(6, 5);
    SpRealization r = sp_compose(t);
    auto paths = enumerate_st_paths(full_view(r.graph));
    for (int leaf = 0; leaf < t.leaf_count(); ++leaf) {
        auto [u, w] = r.leaf_direction[leaf];
        for (const auto& pth : paths)
            for (size_t i = 0; i + 1 < pth.size(); ++i)
                if (canonical_edge(pth[i], pth[i + 1]) == canonical_edge(u, w)) {
                    CHECK(pth[i] == u);  // never traversed against its st-direction
                    CHECK(pth[i + 1] == w);
                }
    }
}

TEST_CASE("random terms are deterministic per seed and compose") {
    SpTerm a = random_sp_term(10, 42);
    SpTerm b = random_sp_term(10, 42);
    CHECK(sp_compose(a).graph.edges == sp_compose(b).graph.edges);
    CHECK(a.leaf_count() == 10);
}
