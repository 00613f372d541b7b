#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pes/graph.hpp"

using namespace pes;

static Graph p3() {
    // path s=0 -1 -2 - t=3
    return build_graph(4, {{0, 1}, {1, 2}, {2, 3}}, 0, 3);
}

TEST_CASE("build_graph validates input") {
    CHECK_THROWS_AS(build_graph(3, {{0, 0}}, 0, 1), GraphError);
    CHECK_THROWS_AS(build_graph(3, {{0, 1}, {1, 0}}, 0, 1), GraphError);
    CHECK_THROWS_AS(build_graph(3, {{0, 3}}, 0, 1), GraphError);
    CHECK_THROWS_AS(build_graph(2, {{0, 1}}, 0, 2), GraphError);
}

TEST_CASE("directed basis order is (min,max,direction)") {
    Graph g = p3();
    CHECK(g.edges.size() == 3);
    CHECK(g.directed_index(0, 1) == 0);
    CHECK(g.directed_index(1, 0) == 1);
    CHECK(g.directed_index(2, 3) == 4);
    auto [u, v] = g.directed_endpoints(5);
    CHECK(u == 3);
    CHECK(v == 2);
}

TEST_CASE("edge association singletons cover exactly once") {
    Graph g = p3();
    auto a = EdgeAssociation::singletons(g);
    CHECK(a.m == 3);
    CHECK_NOTHROW(a.validate(g));
    a.assoc[0].push_back(1);
    CHECK_THROWS_AS(a.validate(g), GraphError);
}

TEST_CASE("oracle charges non-free bits only") {
    Graph g = p3();
    InputOracle o;
    o.assoc = EdgeAssociation::singletons(g);
    o.x = {1, 0, 1};
    o.free_bits = {1};
    CHECK(o.query(0, "unit") == 1);
    CHECK(o.query(1, "unit") == 0);
    CHECK(o.query(2, "unit") == 1);
    CHECK(o.ledger.breakdown.at("unit").exact == 2);
    CHECK(o.ledger.total_exact() == 2);
    CHECK_THROWS_AS(o.query(7, "unit"), GraphError);
}

TEST_CASE("subgraph view reflects x") {
    Graph g = p3();
    auto a = EdgeAssociation::singletons(g);
    SubgraphView v = subgraph(g, a, {1, 0, 1});
    CHECK(v.has_edge(0, 1));
    CHECK(!v.has_edge(1, 2));
    CHECK(v.present_edges().size() == 2);
    CHECK(!classical_st_connected(v, 0, 3));
    SubgraphView full = full_view(g);
    CHECK(classical_st_connected(full, 0, 3));
    CHECK(bfs_distance(full, 0, 3) == 3);
    CHECK(bfs_distance(v, 0, 3) == -1);
}

TEST_CASE("vertex and edge deletion keep ids") {
    Graph g = build_graph(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}, 0, 3);
    Graph gm = remove_vertex(g, 1);
    CHECK(gm.n == 4);
    CHECK(!gm.has_edge(0, 1));
    CHECK(gm.has_edge(0, 2));
    Graph ge = remove_edges(g, {{0, 2}});
    CHECK(!ge.has_edge(0, 2));
    CHECK(ge.has_edge(0, 1));
}

TEST_CASE("st path enumeration: C4 has two paths, P3 one") {
    Graph c4 = build_graph(4, {{0, 1}, {1, 3}, {0, 2}, {2, 3}}, 0, 3);
    auto paths = enumerate_st_paths(full_view(c4));
    CHECK(paths.size() == 2);
    auto p = enumerate_st_paths(full_view(p3()));
    REQUIRE(p.size() == 1);
    CHECK(p[0] == std::vector<int>{0, 1, 2, 3});
    // s = t edge case
    auto trivial = enumerate_st_paths(full_view(c4), 2, 2);
    REQUIRE(trivial.size() == 1);
    CHECK(trivial[0] == std::vector<int>{2});
}
