#include "r2d/ktheory.hpp"

#include <doctest.h>

using namespace r2d;

namespace {

ModelHandle ledrappier_model() { return build_model(ledrappier_spec()); }

Rank2Graph loops_graph(int nh, int nv) {
    Rank2Graph g;
    g.vertices = {"*"};
    for (int i = 0; i < nh; ++i) g.hEdges.push_back({"h" + std::to_string(i), 0, 0});
    for (int i = 0; i < nv; ++i) g.vEdges.push_back({"v" + std::to_string(i), 0, 0});
    for (int e = 0; e < nh; ++e)
        for (int f = 0; f < nv; ++f) g.rho.emplace(g.pair_key(e, f), std::make_pair(f, e));
    REQUIRE(validate_rank2_graph(g).ok);
    return g;
}

Rank2Graph reducible_graph() {
    Rank2Graph g;
    g.vertices = {"u", "w"};
    g.hEdges = {{"eu", 0, 0}, {"ew", 1, 1}};
    g.vEdges = {{"fu", 0, 0}, {"fw", 1, 1}};
    g.rho.emplace(g.pair_key(0, 0), std::make_pair(0, 0));
    g.rho.emplace(g.pair_key(1, 1), std::make_pair(1, 1));
    REQUIRE(validate_rank2_graph(g).ok);
    return g;
}

} // namespace

TEST_CASE("ledrappier diagonal chain: block sizes 1,4,16 and supernatural 2^inf") {
    BratteliDiagram d = bratteli_build(ledrappier_model(), {{0, 0}, {1, 1}, {2, 2}}, {3, 3});
    REQUIRE(d.levels.size() == 3);
    for (const auto& lv : d.levels) REQUIRE(lv.sizes.size() == 1);
    CHECK(d.levels[0].sizes[0] == 1);
    CHECK(d.levels[1].sizes[0] == 4);
    CHECK(d.levels[2].sizes[0] == 16);
    CHECK(d.levels[0].counts[0] == 32);
    CHECK(d.levels[1].counts[0] == 8);
    CHECK(d.levels[2].counts[0] == 2);
    CHECK(d.edges[0](0, 0) == 4);
    CHECK(d.edges[1](0, 0) == 4);

    // total matrix dimension (sum of size^2 * count) multiplies by 4 per step
    auto dim = [&](const BratteliLevel& lv) {
        Integer t = 0;
        for (size_t i = 0; i < lv.sizes.size(); ++i) t += lv.counts[i] * lv.sizes[i] * lv.sizes[i];
        return t;
    };
    CHECK(dim(d.levels[1]) == 4 * dim(d.levels[0]));
    CHECK(dim(d.levels[2]) == 4 * dim(d.levels[1]));

    DimensionGroupReport rep = dimension_group_report(d);
    REQUIRE(rep.supernatural.has_value());
    CHECK(supernatural_to_string(*rep.supernatural) == "2^inf");
}

TEST_CASE("circle (2,3) diagonal chain: sizes 6^t, supernatural 2^inf*3^inf, K0 = Z[1/6]") {
    ModelHandle c = build_model_circle(2, 3);
    BratteliDiagram d = bratteli_build(c, {{0, 0}, {1, 1}, {2, 2}, {3, 3}}, {4, 4});
    REQUIRE(d.levels.size() == 4);
    Integer expect = 1;
    for (const auto& lv : d.levels) {
        CHECK(lv.sizes[0] == expect);
        CHECK(lv.base == "circle");
        expect *= 6;
    }
    for (const auto& e : d.edges) CHECK(e(0, 0) == 6);
    DimensionGroupReport rep = dimension_group_report(d);
    REQUIRE(rep.supernatural.has_value());
    CHECK(supernatural_to_string(*rep.supernatural) == "2^inf*3^inf");
    CHECK(rep.k0_note == "Z[1/6]");
    CHECK(rep.stationary);
}

TEST_CASE("circle block sizes k(n) = 2^{n1} 3^{n2} for all n <= (3,3)") {
    ModelHandle c = build_model_circle(2, 3);
    for (int a = 0; a <= 3; ++a)
        for (int b = 0; b <= 3; ++b) {
            RnAlgebraDescription d = rn_algebra_description(c, {a, b}, {4, 4});
            Integer expect = 1;
            for (int i = 0; i < a; ++i) expect *= 2;
            for (int i = 0; i < b; ++i) expect *= 3;
            CHECK(d.circle_matrix_size == expect);
        }
}

TEST_CASE("kgraph diagonal core sizes are 6^m for the (2,3)-loop graph") {
    Rank2Graph g = loops_graph(2, 3);
    BratteliDiagram d = bratteli_from_kgraph(g, {{0, 0}, {1, 1}, {2, 2}, {3, 3}});
    Integer expect = 1;
    for (const auto& lv : d.levels) {
        REQUIRE(lv.sizes.size() == 1);
        CHECK(lv.sizes[0] == expect);
        expect *= 6;
    }
    DimensionGroupReport rep = dimension_group_report(d);
    REQUIRE(rep.supernatural.has_value());
    CHECK(supernatural_to_string(*rep.supernatural) == "2^inf*3^inf");
}

TEST_CASE("kgraph horizontal-only chain uses powers of M1 transpose") {
    Rank2Graph g = loops_graph(2, 3);
    BratteliDiagram d = bratteli_from_kgraph(g, {{0, 0}, {1, 0}, {2, 0}});
    CHECK(d.levels[1].sizes[0] == 2);
    CHECK(d.levels[2].sizes[0] == 4);
    for (const auto& e : d.edges) CHECK(e(0, 0) == 2);
}

TEST_CASE("two-vertex commuting graph: diagonal steps carry (M1 M2)^T") {
    // One edge of each kind between every ordered vertex pair: M1 = M2 = all-ones.
    Rank2Graph g;
    g.vertices = {"u", "w"};
    int id = 0;
    for (int r = 0; r < 2; ++r)
        for (int s = 0; s < 2; ++s) {
            g.hEdges.push_back({"e" + std::to_string(id), s, r});
            g.vEdges.push_back({"f" + std::to_string(id), s, r});
            ++id;
        }
    // rho(e: a<-b, f: b<-c) = (f': a<-b, e': b<-c), matching endpoints
    auto h_at = [&](int rng, int src) {
        for (size_t i = 0; i < g.hEdges.size(); ++i)
            if (g.hEdges[i].rng == rng && g.hEdges[i].src == src) return static_cast<int>(i);
        return -1;
    };
    auto v_at = [&](int rng, int src) {
        for (size_t i = 0; i < g.vEdges.size(); ++i)
            if (g.vEdges[i].rng == rng && g.vEdges[i].src == src) return static_cast<int>(i);
        return -1;
    };
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                g.rho.emplace(g.pair_key(h_at(a, b), v_at(b, c)),
                              std::make_pair(v_at(a, b), h_at(b, c)));
    REQUIRE(validate_rank2_graph(g).ok);

    BratteliDiagram d = bratteli_from_kgraph(g, {{0, 0}, {1, 1}, {2, 2}});
    IntMat m1 = g.vertex_matrix_h(), m2 = g.vertex_matrix_v();
    IntMat want = IntMat((m1 * m2).transpose());
    for (const auto& e : d.edges) CHECK(exactly_equal(e, want));
    DimensionGroupReport rep = dimension_group_report(d);
    CHECK(rep.stationary);
    CHECK(rep.primitive);
    CHECK(rep.primitive_power == 1);
}

TEST_CASE("constant chain gives identity edges and Z^k") {
    Rank2Graph g = reducible_graph();
    BratteliDiagram d = bratteli_from_kgraph(g, {{1, 1}, {1, 1}, {1, 1}});
    for (const auto& e : d.edges)
        for (Eigen::Index i = 0; i < e.rows(); ++i)
            for (Eigen::Index j = 0; j < e.cols(); ++j) CHECK(e(i, j) == (i == j ? 1 : 0));
    DimensionGroupReport rep = dimension_group_report(d);
    CHECK(rep.stationary);
    CHECK_FALSE(rep.supernatural.has_value());
    CHECK(rep.k0_note == "Z^2");
    CHECK_FALSE(rep.primitive);
}

TEST_CASE("telescoping preserves the dimension-group data") {
    ModelHandle c = build_model_circle(2, 3);
    BratteliDiagram d = bratteli_build(c, {{0, 0}, {1, 1}, {2, 2}, {3, 3}, {4, 4}}, {5, 5});
    BratteliDiagram t = telescope(d);
    DimensionGroupReport a = dimension_group_report(d);
    DimensionGroupReport b = dimension_group_report(t);
    REQUIRE(a.supernatural.has_value());
    REQUIRE(b.supernatural.has_value());
    CHECK(*a.supernatural == *b.supernatural);  // 6^inf = 36^inf as prime maps
}

TEST_CASE("stationary multi-vertex diagrams get Perron data and a primitivity certificate") {
    BratteliDiagram d;
    IntMat e(2, 2);
    e(0, 0) = 1; e(0, 1) = 1; e(1, 0) = 1; e(1, 1) = 0;
    std::vector<Integer> s{1, 1};
    for (int t = 0; t < 4; ++t) {
        BratteliLevel lv;
        lv.n = {t, t};
        lv.sizes = s;
        lv.counts = {1, 1};
        lv.base = "vertices";
        lv.labels = {"a", "b"};
        d.levels.push_back(lv);
        if (t < 3) {
            d.edges.push_back(e);
            std::vector<Integer> ns{s[0] + s[1], s[0]};
            s = ns;
        }
    }
    DimensionGroupReport rep = dimension_group_report(d);
    CHECK(rep.stationary);
    REQUIRE(rep.char_poly.has_value());
    // x^2 - x - 1
    CHECK(*rep.char_poly == std::vector<Integer>{1, -1, -1});
    CHECK(rep.primitive);
    CHECK(rep.primitive_power == 2);
}

TEST_CASE("inconsistent diagrams are rejected") {
    BratteliDiagram d;
    BratteliLevel a, b;
    a.n = {0, 0};
    a.sizes = {1};
    a.counts = {1};
    b.n = {1, 1};
    b.sizes = {3};
    b.counts = {1};
    d.levels = {a, b};
    IntMat e(1, 1);
    e(0, 0) = 2;  // 2*1 != 3
    d.edges = {e};
    CHECK_THROWS_WITH_AS(validate_diagram(d), doctest::Contains("inconsistent-diagram"), Error);
}

TEST_CASE("simplicity evidence: circle simple, reducible graph obstructed") {
    SUBCASE("circle (2,3)") {
        SimplicityBudget budget;
        SimplicityReport rep = simplicity_report(build_model_circle(2, 3), budget);
        CHECK(rep.verdict == SimplicityReport::Verdict::EvidenceForSimple);
    }
    SUBCASE("single-vertex loop graph") {
        SimplicityBudget budget;
        budget.depth = {1, 1};
        budget.kmax = {1, 1};
        SimplicityReport rep = simplicity_report(build_model(loops_graph(2, 3)), budget);
        CHECK(rep.verdict == SimplicityReport::Verdict::EvidenceForSimple);
    }
    SUBCASE("reducible two-vertex graph") {
        SimplicityBudget budget;
        budget.depth = {1, 1};
        budget.kmax = {2, 2};
        SimplicityReport rep = simplicity_report(build_model(reducible_graph()), budget);
        CHECK(rep.verdict == SimplicityReport::Verdict::ObstructionFound);
        bool some_partial = false;
        for (const auto& ev : rep.minimality)
            if (ev.stabilized_below_full) some_partial = true;
        CHECK(some_partial);
    }
    SUBCASE("circle (2,2) has identically equal shifts") {
        SimplicityBudget budget;
        SimplicityReport rep = simplicity_report(build_model_circle(2, 2), budget);
        CHECK(rep.verdict == SimplicityReport::Verdict::ObstructionFound);
    }
}

TEST_CASE("cuntz tensor core sizes") {
    CoreCheckReport a = cuntz_tensor_core_check(2, 2, 3);
    CHECK(a.sizes == std::vector<Integer>{4, 16, 64});
    CHECK(a.sizes_match_power);
    CHECK(a.flip_preserves_inner);

    CoreCheckReport b = cuntz_tensor_core_check(2, 3, 3);
    CHECK(b.sizes == std::vector<Integer>{6, 36, 216});
    CHECK(b.sizes_match_power);

    CoreCheckReport c = cuntz_tensor_core_check(1, 3, 3);
    CHECK(c.sizes == std::vector<Integer>{3, 9, 27});
}

TEST_CASE("diagram DOT rendering lists levels and weighted edges") {
    BratteliDiagram d = bratteli_build(ledrappier_model(), {{0, 0}, {1, 1}}, {3, 3});
    std::string dot = diagram_to_dot(d);
    CHECK(dot.find("digraph bratteli") != std::string::npos);
    CHECK(dot.find("label=\"4\"") != std::string::npos);
}
