#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pes/flow.hpp"
#include "pes/span_program.hpp"

using namespace pes;

static std::vector<int> ones(const Graph& g) {
    return std::vector<int>(g.edges.size(), 1);
}

TEST_CASE("st-connectivity program shape") {
    Graph p3 = build_graph(4, {{0, 1}, {1, 2}, {2, 3}}, 0, 3);
    SpanProgram p = build_stconn_program(p3);
    CHECK(p.dim_h == 6);
    CHECK(p.dim_v == 4);
    CHECK(p.tau[0] == 1.0);
    CHECK(p.tau[3] == -1.0);
    // A|u,v> = |u> - |v>
    CHECK(p.A(0, 0) == 1.0);
    CHECK(p.A(1, 0) == -1.0);
    CHECK(p.A(1, 1) == 1.0);
    CHECK(p.A(0, 1) == -1.0);
}

TEST_CASE("positive witness sizes: single edge 1/2, P3 3/2, triangle 1/3") {
    Graph e1 = build_graph(2, {{0, 1}}, 0, 1);
    CHECK(positive_witness(build_stconn_program(e1), ones(e1)).w_plus ==
          doctest::Approx(0.5).epsilon(1e-12));
    Graph p3 = build_graph(4, {{0, 1}, {1, 2}, {2, 3}}, 0, 3);
    CHECK(positive_witness(build_stconn_program(p3), ones(p3)).w_plus ==
          doctest::Approx(1.5).epsilon(1e-12));
    Graph tri = build_graph(3, {{0, 1}, {0, 2}, {1, 2}}, 0, 1);
    CHECK(positive_witness(build_stconn_program(tri), ones(tri)).w_plus ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("w_+ = R/2 and witness is the halved optimal flow") {
    Graph g = build_graph(5, {{0, 1}, {1, 4}, {0, 2}, {2, 3}, {3, 4}, {1, 3}}, 0, 4);
    SpanProgram p = build_stconn_program(g);
    auto pos = positive_witness(p, ones(g));
    SubgraphView v = full_view(g);
    CHECK(pos.w_plus ==
          doctest::Approx(effective_resistance(v) / 2.0).epsilon(1e-12));
    UnitFlow f = optimal_unit_flow(v);
    for (int idx = 0; idx < p.dim_h; ++idx) {
        auto [u, w] = g.directed_endpoints(idx);
        CHECK(pos.w[idx] == doctest::Approx(f.theta(u, w) / 2.0).epsilon(1e-9));
    }
}

TEST_CASE("positive witness rejects 0-inputs") {
    Graph p3 = build_graph(4, {{0, 1}, {1, 2}, {2, 3}}, 0, 3);
    CHECK_THROWS_AS(positive_witness(build_stconn_program(p3), {1, 0, 1}), GraphError);
}

TEST_CASE("negative witness: exact on 0-inputs, approximate on 1-inputs") {
    Graph p3 = build_graph(4, {{0, 1}, {1, 2}, {2, 3}}, 0, 3);
    SpanProgram p = build_stconn_program(p3);
    auto neg0 = approx_negative_witness(p, {1, 0, 1});
    CHECK(neg0.neg_error == doctest::Approx(0.0).epsilon(1e-18));
    CHECK(neg0.omega.dot(p.tau) == doctest::Approx(1.0));
    auto neg1 = approx_negative_witness(p, ones(p3));
    CHECK(neg1.neg_error > 0.0);
    CHECK(neg1.omega.dot(p.tau) == doctest::Approx(1.0));
    // quadratic uncertainty: w_+ * w~_- >= 1
    auto pos = positive_witness(p, ones(p3));
    CHECK(pos.w_plus * neg1.neg_size >= 1.0 - 1e-9);
}

TEST_CASE("inverse witness identity") {
    Graph tri = build_graph(3, {{0, 1}, {0, 2}, {1, 2}}, 0, 1);
    CHECK(verify_inverse_witness(build_stconn_program(tri), ones(tri)) <= 1e-7);
    Graph c4 = build_graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}, 0, 2);
    CHECK(verify_inverse_witness(build_stconn_program(c4), ones(c4)) <= 1e-7);
}

TEST_CASE("default stconn bounds dominate computed witnesses") {
    Graph g = build_graph(5, {{0, 1}, {1, 4}, {0, 2}, {2, 3}, {3, 4}, {1, 3}}, 0, 4);
    SpanProgram p = build_stconn_program(g);
    WitnessBounds b = default_bounds_stconn(g.n);
    CHECK(positive_witness(p, ones(g)).w_plus <= b.W_plus);
    CHECK(approx_negative_witness(p, ones(g)).neg_size <= b.W_minus_tilde);
}
