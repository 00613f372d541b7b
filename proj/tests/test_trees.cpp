#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pes/flow.hpp"
#include "pes/trees.hpp"

using namespace pes;

TEST_CASE("matrix-tree counts: C4 has 4, K4 has 16") {
    Graph c4 = build_graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}, 0, 2);
    CHECK(spanning_tree_count(full_view(c4)) == 4);
    Graph k4 = build_graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}, 0, 3);
    CHECK(spanning_tree_count(full_view(k4)) == 16);
    CHECK(enumerate_spanning_trees(full_view(k4)).size() == 16);
}

TEST_CASE("contraction merges multiplicities and drops loops") {
    Graph c4 = build_graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}, 0, 2);
    Multigraph m = Multigraph::from_view(full_view(c4));
    Multigraph c = m.contract(0, 2);  // two parallel 2-paths collapse
    CHECK(c.mult.at(canonical_edge(0, 1)) == 2);
    CHECK(c.mult.at(canonical_edge(0, 3)) == 2);
    CHECK(spanning_tree_count(c) == 4);
}

TEST_CASE("directed tree counts on C4: N(s,a) = 2") {
    // s=0, t=2; trees whose st-path traverses 0->1
    Graph c4 = build_graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}, 0, 2);
    SubgraphView v = full_view(c4);
    CHECK(count_trees_using_directed_edge(v, 0, 1) == 2);
    CHECK(count_trees_using_directed_edge(v, 1, 0) == 0);
    CHECK(flow_via_trees(v, 0, 1) == doctest::Approx(0.5));
}

TEST_CASE("tree-ratio flow equals Laplacian flow on K4") {
    Graph k4 = build_graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}, 0, 3);
    SubgraphView v = full_view(k4);
    UnitFlow f = optimal_unit_flow(v);
    for (auto [u, w] : v.present_edges())
        CHECK(flow_via_trees(v, u, w) == doctest::Approx(f.theta(u, w)).epsilon(1e-12));
}

TEST_CASE("q_via_trees: P3 middle edge carries 1/3") {
    Graph p3 = build_graph(4, {{0, 1}, {1, 2}, {2, 3}}, 0, 3);
    SubgraphView v = full_view(p3);
    CHECK(q_via_trees(v, 1, 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    // matches theta^2/(2R) summed over both directions
    UnitFlow f = optimal_unit_flow(v);
    FlowDistribution q = edge_distribution(f, effective_resistance(v));
    CHECK(q_via_trees(v, 0, 1) == doctest::Approx(q.q_undirected(0, 1)).epsilon(1e-12));
}

TEST_CASE("q_via_trees requires {s,t} absent") {
    Graph tri = build_graph(3, {{0, 1}, {0, 2}, {1, 2}}, 0, 1);
    CHECK_THROWS_AS(q_via_trees(full_view(tri), 0, 2), GraphError);
}

TEST_CASE("separating forests on C4") {
    Graph c4 = build_graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}, 0, 2);
    SubgraphView v = full_view(c4);
    ForestCount fc = count_separating_forests(v, 0, 1);
    CHECK(fc.total == 4);  // forests = C4 minus two edges, one per arm
    CHECK(fc.with_edge_in_cut == 2);
    CHECK(fc.p_prime() == doctest::Approx(0.5));
}
