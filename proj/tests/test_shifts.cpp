#include "r2d/shifts.hpp"

#include <doctest.h>

#include <set>

using namespace r2d;

namespace {

ModelHandle ledrappier_model() { return build_model(ledrappier_spec()); }
ModelHandle fullshift_model() { return build_model_full_shift({"0", "1"}); }

RectPattern rect(Vec2 shape, std::vector<std::uint8_t> cells) {
    RectPattern p;
    p.shape = shape;
    p.cells = std::move(cells);
    return p;
}

} // namespace

TEST_CASE("apply_shift restricts coordinates and commutes") {
    ModelHandle m = ledrappier_model();
    // row-major [x00=0, x10=1 / x01=1, x11=0]
    Pattern p = rect({2, 2}, {0, 1, 1, 0});
    CHECK(pattern_eq(apply_shift(m, p, {0, 0}), p));
    Pattern s = apply_shift(m, p, {1, 0});
    CHECK(pattern_eq(s, Pattern(rect({1, 2}, {1, 0}))));
    for (const auto& q : admissible_patterns(m, {3, 3})) {
        Pattern a = apply_shift(m, apply_shift(m, q, {1, 0}), {0, 1});
        Pattern b = apply_shift(m, apply_shift(m, q, {0, 1}), {1, 0});
        CHECK(pattern_eq(a, b));
    }
    CHECK_THROWS_WITH_AS(apply_shift(m, p, {2, 0}), doctest::Contains("shape-underflow"), Error);
}

TEST_CASE("ledrappier fibers have two elements of weight 1/2 in both directions") {
    ModelHandle m = ledrappier_model();
    FiberMeasureSystem mu = FiberMeasureSystem::counting();
    for (int dir = 1; dir <= 2; ++dir)
        for (const auto& t : admissible_patterns(m, {1, 1})) {
            auto fiber = fiber_decomposition(m, mu, dir, t);
            REQUIRE(fiber.size() == 2);
            Rational total(0);
            for (const auto& [y, w] : fiber) {
                CHECK(w == Rational(1, 2));
                total += w;
                CHECK(pattern_eq(apply_shift(m, y, unit_vec(dir)), t));
            }
            CHECK(total == 1);
        }
}

TEST_CASE("ledrappier fiber counts stay 2 at larger depths") {
    ModelHandle m = ledrappier_model();
    for (int dir = 1; dir <= 2; ++dir)
        for (int dx = 1; dx <= 3; ++dx)
            for (int dy = 1; dy <= 3; ++dy)
                for (const auto& t : admissible_patterns(m, {dx, dy}))
                    CHECK(pattern_fiber(m, dir, t).size() == 2);
}

TEST_CASE("circle point fibers are the p-th roots above the image") {
    ModelHandle m = build_model_circle(2, 3);
    FiberMeasureSystem mu = FiberMeasureSystem::counting();
    auto fiber = fiber_decomposition(m, mu, 2, Pattern(Angle(Rational(0))));
    REQUIRE(fiber.size() == 3);
    std::vector<Rational> want{Rational(0), Rational(1, 3), Rational(2, 3)};
    for (size_t i = 0; i < 3; ++i) {
        CHECK(std::get<Angle>(fiber[i].first).value == want[i]);
        CHECK(fiber[i].second == Rational(1, 3));
    }
}

TEST_CASE("full shift fibers carry Bernoulli weights") {
    ModelHandle m = fullshift_model();
    FiberMeasureSystem mu = default_measure(m);
    auto fiber = fiber_decomposition(m, mu, 1, Pattern(rect({1, 1}, {0})));
    REQUIRE(fiber.size() == 2);
    CHECK(fiber[0].second == Rational(1, 2));
    CHECK(fiber[1].second == Rational(1, 2));

    // biased weights renormalize per fiber and still sum to 1
    FiberMeasureSystem biased =
        FiberMeasureSystem::product({Rational(1, 4), Rational(3, 4)}, {Rational(1, 2), Rational(1, 2)});
    auto bf = fiber_decomposition(m, biased, 1, Pattern(rect({1, 1}, {0})));
    Rational total(0);
    for (const auto& [y, w] : bf) total += w;
    CHECK(total == 1);
}

TEST_CASE("local injectivity verified for ledrappier with window {(0,0)} at depth (4,4)") {
    ModelHandle m = ledrappier_model();
    for (int dir = 1; dir <= 2; ++dir) {
        auto v = check_local_injectivity(m, dir, {{0, 0}}, {4, 4});
        CHECK(v.status == LocalInjectivityVerdict::Status::VerifiedAtDepth);
    }
}

TEST_CASE("local injectivity verdicts are monotone on ledrappier depths 1..4") {
    ModelHandle m = ledrappier_model();
    for (int dir = 1; dir <= 2; ++dir)
        for (int d = 1; d <= 4; ++d) {
            auto v = check_local_injectivity(m, dir, {{0, 0}}, {d, d});
            CHECK(v.status == LocalInjectivityVerdict::Status::VerifiedAtDepth);
        }
}

TEST_CASE("full shift refutation carries a revalidating witness") {
    ModelHandle m = fullshift_model();
    for (int dir = 1; dir <= 2; ++dir) {
        auto v = check_local_injectivity(m, dir, {{0, 0}}, {3, 3});
        REQUIRE(v.status == LocalInjectivityVerdict::Status::RefutedWithWitness);
        REQUIRE(v.witness.has_value());
        const auto& [y, z] = *v.witness;
        CHECK_FALSE(pattern_eq(y, z));
        CHECK(pattern_admissible(m.sft(), std::get<RectPattern>(y)));
        CHECK(pattern_admissible(m.sft(), std::get<RectPattern>(z)));
        CHECK(pattern_eq(apply_shift(m, y, unit_vec(dir)), apply_shift(m, z, unit_vec(dir))));
        const auto& ry = std::get<RectPattern>(y);
        const auto& rz = std::get<RectPattern>(z);
        CHECK(ry.at(0, 0) == rz.at(0, 0));  // agree on the window
    }
}

TEST_CASE("circle injectivity: fine arcs verify, coarse arcs refute") {
    ModelHandle m = build_model_circle(2, 3);
    auto fine = check_local_injectivity(m, 1, {}, {1, 1});
    CHECK(fine.status == LocalInjectivityVerdict::Status::VerifiedAtDepth);
    // depth (1,0): two arcs of length 1/2; the three sigma_2-preimages of any
    // point cannot be separated.
    auto coarse = check_local_injectivity(m, 2, {}, {1, 1});
    CHECK(coarse.status == LocalInjectivityVerdict::Status::VerifiedAtDepth);
    auto refuted = check_local_injectivity(m, 2, {}, {1, 0});
    REQUIRE(refuted.status == LocalInjectivityVerdict::Status::RefutedWithWitness);
    const auto& [a, b] = *refuted.witness;
    const auto& aa = std::get<Angle>(a);
    const auto& bb = std::get<Angle>(b);
    CHECK(aa.value != bb.value);
    // same image and same depth arc
    CHECK(circle_apply(m.circle(), {0, 1}, aa) == circle_apply(m.circle(), {0, 1}, bb));
}

TEST_CASE("kgraph shifts are locally injective with the unit-square window") {
    Rank2Graph g;
    g.vertices = {"*"};
    g.hEdges = {{"a", 0, 0}, {"b", 0, 0}};
    g.vEdges = {{"x", 0, 0}, {"y", 0, 0}, {"z", 0, 0}};
    for (int e = 0; e < 2; ++e)
        for (int f = 0; f < 3; ++f) g.rho.emplace(g.pair_key(e, f), std::make_pair(f, e));
    ModelHandle m = build_model(g);
    auto v = check_local_injectivity(m, 1, {{0, 0}}, {2, 2});
    CHECK(v.status == LocalInjectivityVerdict::Status::VerifiedAtDepth);
    auto r = check_local_injectivity(m, 1, {}, {2, 2});
    CHECK(r.status == LocalInjectivityVerdict::Status::RefutedWithWitness);
}

TEST_CASE("open and surjective at depth for ledrappier and circle") {
    ModelHandle m = ledrappier_model();
    for (int dir = 1; dir <= 2; ++dir) {
        auto rep = check_open_surjective(m, dir, {3, 3});
        CHECK(rep.surjective_at_depth);
        CHECK(rep.empty_fiber_witnesses.empty());
        CHECK(rep.open_at_depth);
    }
    ModelHandle c = build_model_circle(2, 3);
    auto rep = check_open_surjective(c, 1, {2, 2});
    CHECK(rep.surjective_at_depth);
    CHECK(rep.open_at_depth);
}

TEST_CASE("a sink symbol produces a non-surjectivity witness") {
    SftSpec spec;
    spec.alphabet = {"a", "b"};
    spec.window = {{0, 0}, {1, 0}};
    spec.allowed = {{0, 1}, {1, 1}};  // nothing may precede 'a'
    spec.normalize();
    ModelHandle m = ModelHandle::make_sft(spec);
    auto rep = check_open_surjective(m, 1, {1, 1});
    CHECK_FALSE(rep.surjective_at_depth);
    REQUIRE_FALSE(rep.empty_fiber_witnesses.empty());
    CHECK(std::get<RectPattern>(rep.empty_fiber_witnesses.front()).cells ==
          std::vector<std::uint8_t>{0});
}

TEST_CASE("orbit reach with kBound (0,0) is the truncated seed") {
    ModelHandle m = ledrappier_model();
    Pattern seed = admissible_patterns(m, {3, 3}).front();
    auto rep = orbit_reach(m, seed, {0, 0}, {2, 2});
    REQUIRE(rep.reached.size() == 1);
    CHECK(pattern_eq(rep.reached.front(), truncate_pattern(m, seed, {2, 2})));
}

TEST_CASE("ledrappier orbit reach agrees with the brute-force filter oracle") {
    ModelHandle m = ledrappier_model();
    auto all = admissible_patterns(m, {5, 5});
    Pattern seed = all.front();  // the all-zeros pattern is lexicographically first
    Vec2 kb{3, 3}, depth{2, 2};
    auto rep = orbit_reach(m, seed, kb, depth);

    std::set<std::string> oracle;
    for (int kx = 0; kx <= kb.x; ++kx)
        for (int ky = 0; ky <= kb.y; ++ky) {
            Vec2 k{kx, ky};
            Pattern tk = apply_shift(m, seed, k);
            Vec2 ts = pattern_shape(m, tk);
            // filter every admissible pattern of the padded shape
            for (const auto& y : admissible_patterns(m, cmax(depth + k, Vec2{5, 5}))) {
                Pattern sy = apply_shift(m, y, k);
                if (pattern_eq(truncate_pattern(m, sy, ts), tk))
                    oracle.insert(pattern_to_string(m, truncate_pattern(m, y, depth)));
            }
        }
    std::set<std::string> got;
    for (const auto& p : rep.reached) got.insert(pattern_to_string(m, p));
    CHECK(got == oracle);
    CHECK(rep.full);  // reach fills all 8 depth-(2,2) patterns
}

TEST_CASE("circle orbit reach covers every arc at depth (2,2)") {
    ModelHandle m = build_model_circle(2, 3);
    auto rep = orbit_reach(m, Pattern(Angle(Rational(1, 5))), {2, 2}, {2, 2});
    CHECK(rep.full);
    CHECK(rep.reached.size() == 36);
}

TEST_CASE("periodicity diagnostics") {
    ModelHandle m = fullshift_model();
    auto rep = periodicity_diagnostic(m, {1, 0}, {0, 0}, {2, 2});
    // horizontally constant depth-(2,2) patterns: 4 of 16
    CHECK(rep.consistent.size() == 4);
    CHECK(rep.evidence_positive);
    CHECK_FALSE(rep.all_points_periodic);

    ModelHandle c = build_model_circle(2, 3);
    auto cr = periodicity_diagnostic(c, {1, 0}, {0, 0}, {2, 2});
    CHECK(cr.consistent_count == 1);  // z^2 = z has one rational-angle solution
    CHECK(cr.evidence_positive);

    ModelHandle same = build_model_circle(2, 2);
    auto sr = periodicity_diagnostic(same, {1, 0}, {0, 1}, {2, 2});
    CHECK(sr.all_points_periodic);
    CHECK_FALSE(sr.evidence_positive);

    CHECK_THROWS_WITH_AS(periodicity_diagnostic(m, {1, 0}, {1, 0}, {2, 2}),
                         doctest::Contains("bad-exponents"), Error);
}

TEST_CASE("smallest verified window scan") {
    ModelHandle m = ledrappier_model();
    auto w = smallest_verified_window(m, 1, {2, 2});
    REQUIRE(w.has_value());
    CHECK(w->size() == 1);
    CHECK((*w)[0] == Vec2{0, 0});

    ModelHandle f = fullshift_model();
    CHECK_FALSE(smallest_verified_window(f, 1, {2, 2}).has_value());

    ModelHandle one = build_model_full_shift({"0"});
    auto w1 = smallest_verified_window(one, 1, {2, 2});
    REQUIRE(w1.has_value());
    CHECK(w1->empty());  // singleton fibers need no window at all
}
