#pragma once

#include "r2d/common.hpp"
#include "r2d/rational.hpp"

#include <vector>

namespace r2d {

/// Two covering maps of the circle z -> z^{p1}, z -> z^{p2} with |pi| >= 2.
/// Points are exact rational angles in Q/Z; the depth-(a,b) "patterns" are
/// the |p1|^a |p2|^b-adic subdivision arcs (positive degrees only).
struct CircleSpec {
    long p1 = 2;
    long p2 = 2;

    long degree(int direction) const { return direction == 1 ? p1 : p2; }
};

struct Angle {
    Rational value;  // reduced representative in [0,1)

    explicit Angle(Rational v = Rational(0)) : value(std::move(v)) { reduce(); }
    void reduce();

    friend bool operator==(const Angle& a, const Angle& b) { return a.value == b.value; }
    friend bool operator<(const Angle& a, const Angle& b) { return a.value < b.value; }
};

/// Arc [index/N, (index+1)/N) with N = |p1|^{level.x} |p2|^{level.y}.
struct ArcPattern {
    Vec2 level;
    Integer index;

    friend bool operator==(const ArcPattern& a, const ArcPattern& b) {
        return a.level == b.level && a.index == b.index;
    }
    friend bool operator<(const ArcPattern& a, const ArcPattern& b) {
        if (a.level != b.level) return a.level < b.level;
        return a.index < b.index;
    }
};

Integer arc_count(const CircleSpec& c, Vec2 level);

Angle circle_apply(const CircleSpec& c, Vec2 k, const Angle& a);
std::vector<Angle> circle_point_fiber(const CircleSpec& c, int direction, const Angle& target);

ArcPattern arc_shift(const CircleSpec& c, const ArcPattern& a, Vec2 k);
ArcPattern arc_truncate(const CircleSpec& c, const ArcPattern& a, Vec2 level);
std::vector<ArcPattern> arc_fiber(const CircleSpec& c, int direction, const ArcPattern& target);
ArcPattern arc_of_angle(const CircleSpec& c, Vec2 level, const Angle& a);

CircleSpec transpose(const CircleSpec& c);

} // namespace r2d
