#include "r2d/sft.hpp"

#include <doctest.h>

#include <set>

using namespace r2d;

namespace {

// Independent brute-force oracle for the Ledrappier language: enumerate all
// {0,1} assignments of the rectangle and keep those with
// x(i+1,j) + x(i,j) + x(i,j+1) even. No SftSpec machinery involved.
std::set<std::vector<int>> ledrappier_brute(int m, int n) {
    std::set<std::vector<int>> out;
    int cells = m * n;
    for (int mask = 0; mask < (1 << cells); ++mask) {
        std::vector<int> a(cells);
        for (int c = 0; c < cells; ++c) a[c] = (mask >> c) & 1;
        bool ok = true;
        for (int j = 0; j + 1 < n && ok; ++j)
            for (int i = 0; i + 1 < m && ok; ++i) {
                int v = a[j * m + i + 1] + a[j * m + i] + a[(j + 1) * m + i];
                if (v % 2 != 0) ok = false;
            }
        if (ok) out.insert(a);
    }
    return out;
}

} // namespace

TEST_CASE("ledrappier window holds exactly the four even-parity assignments") {
    SftSpec spec = ledrappier_spec();
    CHECK(spec.alphabet == std::vector<std::string>{"0", "1"});
    REQUIRE(spec.window.size() == 3);
    REQUIRE(spec.allowed.size() == 4);
    // window sorted row-major: (0,0), (1,0), (0,1)
    CHECK(spec.window[0] == Vec2{0, 0});
    CHECK(spec.window[1] == Vec2{1, 0});
    CHECK(spec.window[2] == Vec2{0, 1});
    std::set<std::vector<std::uint8_t>> got(spec.allowed.begin(), spec.allowed.end());
    std::set<std::vector<std::uint8_t>> want{{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
    CHECK(got == want);
}

TEST_CASE("ledrappier pattern counts match 2^(m+n-1) and the brute-force filter") {
    SftSpec spec = ledrappier_spec();
    for (int m = 1; m <= 4; ++m)
        for (int n = 1; n <= 4; ++n) {
            auto pats = enumerate_patterns(spec, {m, n});
            auto brute = ledrappier_brute(m, n);
            CHECK(pats.size() == brute.size());
            CHECK(pats.size() == (1u << (m + n - 1)));
            CHECK(count_patterns_transfer(spec, {m, n}) == Integer(pats.size()));
            for (const auto& p : pats) {
                std::vector<int> a(p.cells.begin(), p.cells.end());
                CHECK(brute.count(a) == 1);
            }
        }
}

TEST_CASE("full shift counts are unconstrained") {
    SftSpec spec = full_shift_spec({"0", "1"});
    CHECK(enumerate_patterns(spec, {2, 3}).size() == 64);
    CHECK(count_patterns_transfer(spec, {2, 3}) == 64);
}

TEST_CASE("enumeration is lexicographic on row-major sequences") {
    SftSpec spec = ledrappier_spec();
    auto pats = enumerate_patterns(spec, {2, 2});
    for (size_t i = 0; i + 1 < pats.size(); ++i) CHECK(pats[i].cells < pats[i + 1].cells);
}

TEST_CASE("every enumerated pattern passes the translate admissibility predicate") {
    SftSpec spec = ledrappier_spec();
    for (const auto& p : enumerate_patterns(spec, {3, 4})) CHECK(pattern_admissible(spec, p));
}

TEST_CASE("validate_sft reports extendable nonempty language for ledrappier") {
    SftSpec spec = ledrappier_spec();
    ValidationReport rep = validate_sft(spec, {3, 3});
    CHECK(rep.ok);
    CHECK(rep.nonempty_at_depth);
    CHECK(rep.extendable);
    CHECK(rep.pattern_count_at_depth == 32);
}

TEST_CASE("validate_sft flags an empty language at depth") {
    SftSpec spec;
    spec.alphabet = {"0", "1"};
    spec.window = {{0, 0}, {1, 0}};
    spec.allowed = {{0, 1}};  // every horizontal pair must be 01: dies at width 3
    spec.normalize();
    ValidationReport rep = validate_sft(spec, {3, 1});
    CHECK_FALSE(rep.ok);
    REQUIRE_FALSE(rep.issues.empty());
    CHECK(rep.issues.front().code == "empty-language-at-depth");
}

TEST_CASE("validate_sft flags symbols outside the alphabet") {
    SftSpec spec;
    spec.alphabet = {"0"};
    spec.window = {{0, 0}};
    spec.allowed = {{3}};
    ValidationReport rep = validate_sft(spec, {1, 1});
    CHECK_FALSE(rep.ok);
    bool found = false;
    for (const auto& i : rep.issues)
        if (i.code == "symbol-out-of-alphabet") found = true;
    CHECK(found);
}

TEST_CASE("unconstrained blowup raises shape-overflow") {
    SftSpec spec = full_shift_spec({"0", "1"});
    CHECK_THROWS_WITH_AS(enumerate_patterns(spec, {6, 5}, 100), doctest::Contains("shape-overflow"),
                         Error);
}

TEST_CASE("constrained enumeration honors fixed cells") {
    SftSpec spec = ledrappier_spec();
    // fix x(0,0) = 1 at shape (2,2): half of the 8 patterns survive
    std::vector<int> fixed(4, -1);
    fixed[0] = 1;
    int count = 0;
    enumerate_constrained(spec, {2, 2}, fixed, kDefaultCandidateBound, [&](const RectPattern& p) {
        CHECK(p.at(0, 0) == 1);
        ++count;
        return true;
    });
    CHECK(count == 4);
}

TEST_CASE("transpose is an involution matching the transposed language") {
    SftSpec spec = ledrappier_spec();
    SftSpec t = transpose(spec);
    auto pats = enumerate_patterns(spec, {3, 2});
    auto tpats = enumerate_patterns(t, {2, 3});
    REQUIRE(pats.size() == tpats.size());
    std::set<std::vector<std::uint8_t>> expect;
    for (const auto& p : pats) expect.insert(transpose(p).cells);
    for (const auto& q : tpats) CHECK(expect.count(q.cells) == 1);
}

TEST_CASE("empty shapes yield the unique empty pattern") {
    SftSpec spec = ledrappier_spec();
    CHECK(enumerate_patterns(spec, {0, 3}).size() == 1);
    CHECK(enumerate_patterns(spec, {0, 0}).size() == 1);
}
