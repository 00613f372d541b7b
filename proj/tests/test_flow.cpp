#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pes/flow.hpp"

using namespace pes;

// triangle: s=0, t=1, third vertex 2
static Graph triangle() {
    return build_graph(3, {{0, 1}, {0, 2}, {1, 2}}, 0, 1);
}

TEST_CASE("series path resistance") {
    Graph g = build_graph(4, {{0, 1}, {1, 2}, {2, 3}}, 0, 3);
    CHECK(effective_resistance(full_view(g)) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("triangle: R = 2/3 and q = (2/3, 1/6, 1/6)") {
    SubgraphView v = full_view(triangle());
    double R = effective_resistance(v);
    CHECK(R == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    UnitFlow f = optimal_unit_flow(v);
    CHECK(f.theta(0, 1) == doctest::Approx(2.0 / 3.0));
    CHECK(f.theta(0, 2) == doctest::Approx(1.0 / 3.0));
    CHECK(f.theta(2, 1) == doctest::Approx(1.0 / 3.0));
    CHECK(f.theta(1, 2) == doctest::Approx(-1.0 / 3.0));
    FlowDistribution q = edge_distribution(f, R);
    CHECK(q.q_undirected(0, 1) == doctest::Approx(2.0 / 3.0));
    CHECK(q.q_undirected(0, 2) == doctest::Approx(1.0 / 6.0));
    CHECK(q.q_undirected(1, 2) == doctest::Approx(1.0 / 6.0));
    CHECK(q.total() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("energy of optimal flow equals resistance") {
    Graph g = build_graph(5, {{0, 1}, {1, 4}, {0, 2}, {2, 3}, {3, 4}, {1, 3}}, 0, 4);
    SubgraphView v = full_view(g);
    UnitFlow f = optimal_unit_flow(v);
    CHECK(f.energy() == doctest::Approx(effective_resistance(v)).epsilon(1e-12));
}

TEST_CASE("flow conservation at internal vertices") {
    Graph g = build_graph(5, {{0, 1}, {1, 4}, {0, 2}, {2, 3}, {3, 4}, {1, 3}}, 0, 4);
    SubgraphView v = full_view(g);
    UnitFlow f = optimal_unit_flow(v);
    auto adj = v.adjacency();
    for (int u = 0; u < g.n; ++u) {
        double net = 0;
        for (int w : adj[u]) net += f.theta(u, w);
        double expect = u == 0 ? 1.0 : (u == 4 ? -1.0 : 0.0);
        CHECK(net == doctest::Approx(expect).epsilon(1e-10));
    }
}

TEST_CASE("disconnected terminals give infinite resistance") {
    Graph g = build_graph(4, {{0, 1}, {2, 3}}, 0, 3);
    CHECK(std::isinf(effective_resistance(full_view(g))));
    CHECK_THROWS_AS(optimal_unit_flow(full_view(g)), GraphError);
}

TEST_CASE("random walk crossing estimate matches flow on triangle") {
    SubgraphView v = full_view(triangle());
    UnitFlow f = optimal_unit_flow(v);
    WalkEstimate e = random_walk_flow(v, 0, 2, 20000, 99);
    CHECK(std::abs(e.mean - f.theta(0, 2)) <= 4 * e.stderr_);
}
