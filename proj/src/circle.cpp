#include "r2d/circle.hpp"

namespace r2d {

void Angle::reduce() {
    value.canonicalize();
    mpz_class num = value.get_num() % value.get_den();
    if (num < 0) num += value.get_den();
    value = Rational(num, value.get_den());
    value.canonicalize();
}

namespace {

Integer pow_abs(long p, int e) {
    Integer r = 1;
    Integer base = p < 0 ? Integer(-p) : Integer(p);
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

Integer pow_signed(long p, int e) {
    Integer r = 1;
    for (int i = 0; i < e; ++i) r *= p;
    return r;
}

void require_positive_degrees(const CircleSpec& c) {
    if (c.p1 < 2 || c.p2 < 2)
        throw Error("unsupported-negative-degree",
                    "arc-level operations require positive covering degrees");
}

} // namespace

Integer arc_count(const CircleSpec& c, Vec2 level) {
    return pow_abs(c.p1, level.x) * pow_abs(c.p2, level.y);
}

Angle circle_apply(const CircleSpec& c, Vec2 k, const Angle& a) {
    if (!k.nonneg()) throw Error("bad-shape", "shift exponent must be in N^2");
    Integer mult = pow_signed(c.p1, k.x) * pow_signed(c.p2, k.y);
    return Angle(Rational(mult) * a.value);
}

std::vector<Angle> circle_point_fiber(const CircleSpec& c, int direction, const Angle& target) {
    long p = c.degree(direction);
    Integer ap = p < 0 ? Integer(-p) : Integer(p);
    std::vector<Angle> out;
    for (Integer t = 0; t < ap; ++t) {
        // Solutions of p*y = target + t (mod 1).
        Rational y((target.value + Rational(t)) / Rational(p));
        out.push_back(Angle(y));
    }
    std::sort(out.begin(), out.end());
    return out;
}

ArcPattern arc_shift(const CircleSpec& c, const ArcPattern& a, Vec2 k) {
    require_positive_degrees(c);
    Vec2 nl = a.level - k;
    if (!k.nonneg() || nl.x < 0 || nl.y < 0)
        throw Error("shape-underflow", "shift exceeds arc subdivision level");
    Integer n_new = arc_count(c, nl);
    return {nl, Integer(a.index % n_new)};
}

ArcPattern arc_truncate(const CircleSpec& c, const ArcPattern& a, Vec2 level) {
    require_positive_degrees(c);
    if (!leq(level, a.level)) throw Error("shape-underflow", "truncation coarser than arc level");
    Integer ratio = arc_count(c, a.level) / arc_count(c, level);
    return {level, Integer(a.index / ratio)};
}

std::vector<ArcPattern> arc_fiber(const CircleSpec& c, int direction, const ArcPattern& target) {
    require_positive_degrees(c);
    Vec2 nl = target.level + unit_vec(direction);
    Integer n_old = arc_count(c, target.level);
    Integer n_new = arc_count(c, nl);
    std::vector<ArcPattern> out;
    for (Integer t = target.index; t < n_new; t += n_old) out.push_back({nl, t});
    return out;  // increasing index order
}

ArcPattern arc_of_angle(const CircleSpec& c, Vec2 level, const Angle& a) {
    require_positive_degrees(c);
    Integer n = arc_count(c, level);
    Rational scaled(a.value * Rational(n));
    Integer idx = scaled.get_num() / scaled.get_den();  // floor, value in [0,1)
    return {level, idx};
}

CircleSpec transpose(const CircleSpec& c) { return {c.p2, c.p1}; }

} // namespace r2d
