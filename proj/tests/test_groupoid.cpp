#include "r2d/groupoid.hpp"
#include "r2d/shifts.hpp"

#include <doctest.h>

#include <random>

using namespace r2d;

namespace {

ModelHandle ledrappier_model() { return build_model(ledrappier_spec()); }
const FiberMeasureSystem kCounting = FiberMeasureSystem::counting();

// All elements (p, q, x, y) with the given exponents at the given depth,
// found by filtering pattern pairs; used both as generator and oracle.
std::vector<GroupoidElementApprox> elements_with(const ModelHandle& m, Vec2 p, Vec2 q, Vec2 depth) {
    std::vector<GroupoidElementApprox> out;
    auto pats = admissible_patterns(m, depth);
    for (const auto& x : pats)
        for (const auto& y : pats) {
            Pattern sx = apply_shift(m, x, p);
            Pattern sy = apply_shift(m, y, q);
            Vec2 ov = cmin(pattern_shape(m, sx), pattern_shape(m, sy));
            if (ov.x <= 0 || ov.y <= 0) continue;
            if (pattern_eq(truncate_pattern(m, sx, ov), truncate_pattern(m, sy, ov)))
                out.push_back(make_element(m, p, q, x, y));
        }
    return out;
}

} // namespace

TEST_CASE("unit elements have degree zero and compose trivially") {
    ModelHandle m = ledrappier_model();
    Pattern x = admissible_patterns(m, {2, 2}).front();
    GroupoidElementApprox u = unit_element(m, x);
    CHECK(u.degree == Vec2{0, 0});
    GroupoidElementApprox uu = compose_elements(m, u, u);
    CHECK(uu.degree == Vec2{0, 0});
    CHECK(pattern_eq(uu.x, x));
}

TEST_CASE("elements built from fibers have the advertised degree") {
    ModelHandle m = ledrappier_model();
    auto pats = admissible_patterns(m, {3, 2});
    int built = 0;
    for (const auto& x : pats) {
        // y extends sigma_1 x back to the common depth (padded on the right)
        Pattern sx = apply_shift(m, x, {1, 0});
        for (const auto& y : pats) {
            if (!pattern_eq(truncate_pattern(m, y, {2, 2}), sx)) continue;
            GroupoidElementApprox g = make_element(m, {1, 0}, {0, 0}, x, y);
            CHECK(g.degree == Vec2{1, 0});
            ++built;
        }
    }
    CHECK(built > 0);

    // mismatched pair: distinct patterns cannot be unit-equivalent
    auto small = admissible_patterns(m, {2, 2});
    CHECK_THROWS_WITH_AS(make_element(m, {0, 0}, {0, 0}, small[0], small[1]),
                         doctest::Contains("incompatible-pair"), Error);
}

TEST_CASE("inversion negates the degree and composes to the unit") {
    ModelHandle m = ledrappier_model();
    auto gs = elements_with(m, {1, 0}, {0, 0}, {3, 3});
    REQUIRE_FALSE(gs.empty());
    for (const auto& g : gs) {
        GroupoidElementApprox gi = invert_element(g);
        CHECK(gi.degree == Vec2{0, 0} - g.degree);
        GroupoidElementApprox e = compose_elements(m, g, gi);
        CHECK(e.degree == Vec2{0, 0});
        CHECK(pattern_eq(e.x, g.x));
        CHECK(pattern_eq(e.y, g.x));
    }
}

TEST_CASE("degrees add along a ledrappier triple") {
    ModelHandle m = ledrappier_model();
    auto g1s = elements_with(m, {1, 0}, {0, 0}, {3, 3});
    bool composed = false;
    for (const auto& g : g1s) {
        for (const auto& h : elements_with(m, {0, 1}, {0, 0}, {3, 3})) {
            if (!pattern_eq(g.y, h.x)) continue;
            GroupoidElementApprox gh = compose_elements(m, g, h);
            CHECK(gh.degree == Vec2{1, 1});
            composed = true;
            break;
        }
        if (composed) break;
    }
    CHECK(composed);
}

TEST_CASE("cocycle additivity over 100 random composable pairs") {
    ModelHandle m = ledrappier_model();
    std::mt19937_64 rng(20240811);
    std::vector<Vec2> exps{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    auto pats = admissible_patterns(m, {3, 3});
    int done = 0;
    while (done < 100) {
        Vec2 p = exps[rng() % exps.size()], q = exps[rng() % exps.size()];
        Vec2 r = exps[rng() % exps.size()], s = exps[rng() % exps.size()];
        auto gs = elements_with(m, p, q, {3, 3});
        auto hs = elements_with(m, r, s, {3, 3});
        if (gs.empty() || hs.empty()) continue;
        const auto& g = gs[rng() % gs.size()];
        // find h with matching middle pattern
        std::vector<const GroupoidElementApprox*> matches;
        for (const auto& h : hs)
            if (pattern_eq(g.y, h.x)) matches.push_back(&h);
        if (matches.empty()) continue;
        const auto& h = *matches[rng() % matches.size()];
        GroupoidElementApprox gh = compose_elements(m, g, h);
        CHECK(gh.degree == g.degree + h.degree);
        CHECK(gh.degree == (g.p + h.p) - (g.q + h.q));
        ++done;
    }
}

TEST_CASE("rn classes partition by the shifted pattern") {
    ModelHandle m = ledrappier_model();

    SUBCASE("n = (0,0) gives singletons") {
        RnPartition part = rn_classes(m, {0, 0}, {2, 2});
        CHECK(part.classes.size() == 8);
        for (const auto& c : part.classes) CHECK(c.size() == 1);
    }
    SUBCASE("n = (1,0) at depth (2,2): four classes of two") {
        RnPartition part = rn_classes(m, {1, 0}, {2, 2});
        CHECK(part.classes.size() == 4);
        for (const auto& c : part.classes) CHECK(c.size() == 2);
        // oracle: direct pairwise comparison of shifted patterns
        for (const auto& cls : part.classes)
            for (int i : cls)
                for (int j : cls) {
                    Pattern a = apply_shift(m, part.basis->patterns[static_cast<size_t>(i)], {1, 0});
                    Pattern b = apply_shift(m, part.basis->patterns[static_cast<size_t>(j)], {1, 0});
                    CHECK(pattern_eq(a, b));
                }
    }
    SUBCASE("n = (1,1) at depth (3,3): eight classes of four") {
        RnPartition part = rn_classes(m, {1, 1}, {3, 3});
        CHECK(part.classes.size() == 8);
        for (const auto& c : part.classes) CHECK(c.size() == 4);
    }
    SUBCASE("classes refine under n <= m") {
        RnPartition fine = rn_classes(m, {1, 0}, {3, 3});
        RnPartition coarse = rn_classes(m, {1, 1}, {3, 3});
        for (const auto& cls : fine.classes) {
            int target = coarse.class_of[static_cast<size_t>(cls.front())];
            for (int i : cls) CHECK(coarse.class_of[static_cast<size_t>(i)] == target);
        }
    }
}

TEST_CASE("rn algebra descriptions") {
    ModelHandle m = ledrappier_model();
    RnAlgebraDescription d = rn_algebra_description(m, {1, 0}, {2, 2});
    CHECK(d.base == RnAlgebraDescription::Base::Finite);
    CHECK(d.block_sizes == std::vector<Integer>{2, 2, 2, 2});

    ModelHandle c = build_model_circle(2, 3);
    RnAlgebraDescription dc = rn_algebra_description(c, {1, 1}, {2, 2});
    CHECK(dc.base == RnAlgebraDescription::Base::Circle);
    CHECK(dc.circle_matrix_size == 6);

    RnAlgebraDescription d0 = rn_algebra_description(m, {0, 0}, {2, 2});
    for (const auto& s : d0.block_sizes) CHECK(s == 1);

    ModelHandle f = build_model_full_shift({"0", "1"});
    RnAlgebraDescription df = rn_algebra_description(f, {1, 0}, {2, 2});
    CHECK(df.base == RnAlgebraDescription::Base::NonDiscrete);
    REQUIRE(df.class_measures.size() == df.block_sizes.size());
    Rational total(0);
    for (const auto& q : df.class_measures) total += q;
    CHECK(total == 1);
}

TEST_CASE("inclusion multiplicities") {
    ModelHandle m = ledrappier_model();
    SUBCASE("n = m is the identity") {
        InclusionMultiplicity inc = rn_inclusion_multiplicity(m, {1, 0}, {1, 0}, {3, 3});
        REQUIRE(inc.mult.rows() == 1);
        CHECK(inc.mult(0, 0) == 1);
    }
    SUBCASE("(1,0) into (1,1): every size-4 class holds two size-2 classes") {
        InclusionMultiplicity inc = rn_inclusion_multiplicity(m, {1, 0}, {1, 1}, {3, 3});
        REQUIRE(inc.mult.rows() == 1);
        REQUIRE(inc.mult.cols() == 1);
        CHECK(inc.mult(0, 0) == 2);
        CHECK(inc.from_sizes == std::vector<Integer>{2});
        CHECK(inc.to_sizes == std::vector<Integer>{4});
    }
    SUBCASE("circle (0,0) into (1,1) has multiplicity 6") {
        ModelHandle c = build_model_circle(2, 3);
        InclusionMultiplicity inc = rn_inclusion_multiplicity(c, {0, 0}, {1, 1}, {2, 2});
        CHECK(inc.mult(0, 0) == 6);
    }
    SUBCASE("multiplicities compose along the chain (0,0)->(1,0)->(1,1)->(2,2)") {
        Vec2 depth{3, 3};
        std::vector<Vec2> chain{{0, 0}, {1, 0}, {1, 1}, {2, 2}};
        IntMat acc = IntMat::Identity(1, 1);
        for (size_t t = 0; t + 1 < chain.size(); ++t) {
            InclusionMultiplicity step =
                rn_inclusion_multiplicity(m, chain[t], chain[t + 1], depth);
            acc = IntMat(step.mult * acc);
        }
        InclusionMultiplicity direct = rn_inclusion_multiplicity(m, {0, 0}, {2, 2}, depth);
        CHECK(exactly_equal(acc, direct.mult));
    }
}

TEST_CASE("n-step fiber weights multiply along directions and sum to one per class") {
    ModelHandle m = ledrappier_model();
    RnPartition part = rn_classes(m, {1, 1}, {3, 3});
    for (const auto& cls : part.classes) {
        Rational total(0);
        for (int i : cls) {
            Rational w = fiber_weight_pow(m, kCounting, part.basis->patterns[static_cast<size_t>(i)],
                                          {1, 1});
            CHECK(w == Rational(1, 4));
            total += w;
        }
        CHECK(total == 1);
    }
}

TEST_CASE("kernel convolution equals the block-matrix product") {
    SUBCASE("ledrappier n=(1,0): dual-path agreement on the full kernel basis") {
        ModelHandle m = ledrappier_model();
        Vec2 n{1, 0};
        KernelFunction base = kernel_zero(m, kCounting, n, {2, 2});
        // kernel units e_{x,y} per class pair
        std::vector<KernelFunction> units;
        for (size_t c = 0; c < base.partition.classes.size(); ++c)
            for (size_t i = 0; i < base.partition.classes[c].size(); ++i)
                for (size_t j = 0; j < base.partition.classes[c].size(); ++j) {
                    KernelFunction k = base;
                    k.blocks[c](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = CRat(1);
                    units.push_back(std::move(k));
                }
        for (const auto& k1 : units)
            for (const auto& k2 : units) {
                KernelFunction conv = kernel_convolve(k1, k2);
                OperatorMatrix lhs = kernel_to_block_matrix(conv);
                OperatorMatrix rhs1 = kernel_to_block_matrix(k1);
                OperatorMatrix rhs2 = kernel_to_block_matrix(k2);
                CHECK(exactly_equal(lhs.entries, CMat(rhs1.entries * rhs2.entries)));
                // operator path as well
                OperatorMatrix o1 = kernel_operator(k1);
                OperatorMatrix o2 = kernel_operator(k2);
                CHECK(exactly_equal(kernel_operator(conv).entries, CMat(o1.entries * o2.entries)));
            }
    }
    SUBCASE("identity kernel is neutral and maps to the identity block matrix") {
        ModelHandle m = ledrappier_model();
        KernelFunction id = kernel_identity(m, kCounting, {1, 0}, {2, 2});
        OperatorMatrix b = kernel_to_block_matrix(id);
        for (Eigen::Index i = 0; i < b.entries.rows(); ++i)
            for (Eigen::Index j = 0; j < b.entries.cols(); ++j)
                CHECK(b.entries(i, j) == CRat(int(i == j)));
        KernelFunction k = kernel_zero(m, kCounting, {1, 0}, {2, 2});
        k.blocks[0](0, 1) = CRat(Rational(3, 7));
        CHECK(exactly_equal(kernel_convolve(id, k), k));
        CHECK(exactly_equal(kernel_convolve(k, id), k));
    }
    SUBCASE("circle arcs at subdivision depth (2,0): 2x2 blocks over 2 classes") {
        ModelHandle c = build_model_circle(2, 3);
        Vec2 n{1, 0};
        KernelFunction base = kernel_zero(c, kCounting, n, {2, 0});
        REQUIRE(base.partition.classes.size() == 2);
        for (const auto& cls : base.partition.classes) CHECK(cls.size() == 2);
        KernelFunction k1 = base, k2 = base;
        k1.blocks[0](0, 1) = CRat(1);
        k1.blocks[1](1, 0) = CRat(Rational(1, 3));
        k2.blocks[0](1, 1) = CRat(2);
        k2.blocks[1](0, 0) = CRat(Rational(5, 2));
        KernelFunction conv = kernel_convolve(k1, k2);
        CHECK(exactly_equal(kernel_to_block_matrix(conv).entries,
                            CMat(kernel_to_block_matrix(k1).entries *
                                 kernel_to_block_matrix(k2).entries)));
    }
}
