#include "r2d/shifts.hpp"

#include <algorithm>
#include <map>

namespace r2d {

Pattern apply_shift(const ModelHandle& model, const Pattern& p, Vec2 k) {
    if (!k.nonneg()) throw Error("bad-shape", "shift exponent must be in N^2");
    if (!std::holds_alternative<Angle>(p)) {
        Vec2 s = pattern_shape(model, p);
        if (s.x - k.x < 1 || s.y - k.y < 1)
            throw Error("shape-underflow", "pattern of shape " + to_string(s) +
                                               " must exceed the shift " + to_string(k) +
                                               " componentwise");
    }
    return shift_pattern(model, p, k);
}

std::vector<std::pair<Pattern, Rational>> fiber_decomposition(const ModelHandle& model,
                                                              const FiberMeasureSystem& mu,
                                                              int direction, const Pattern& target,
                                                              std::uint64_t bound) {
    validate_measure(model, mu);
    return weighted_fiber(model, mu, direction, target, bound);
}

namespace {

// Direction-1 local injectivity for symbolic models via width-w strips:
// fiber mates differ only in column 0, and admissibility couples column 0 to
// the rest through translates at horizontal offset 0 only, so a witness pair
// exists iff two admissible strips share columns 1..sw-1, agree on the
// window cells of column 0, differ in column 0, and the shared part extends
// to a full admissible pattern.
LocalInjectivityVerdict sft_local_inj_dir1(const ModelHandle& model,
                                           const std::vector<Vec2>& window, Vec2 depth,
                                           std::uint64_t bound) {
    LocalInjectivityVerdict v;
    v.direction = 1;
    v.window = window;
    v.depth = depth;

    const SftSpec& spec = model.sft();
    const int w = spec.window_bbox().x;
    const int sw = std::min(w, depth.x + 1);

    std::vector<int> window_rows;  // window cells in column 0; others are forced equal
    for (Vec2 c : window)
        if (c.x == 0) window_rows.push_back(c.y);
    std::sort(window_rows.begin(), window_rows.end());

    for (int stage = 0; stage < 2; ++stage) {
        const int H = depth.y + stage;
        Vec2 strip_shape{sw, H};
        std::vector<RectPattern> strips;
        try {
            for (auto& p : enumerate_patterns(spec, strip_shape, bound)) strips.push_back(std::move(p));
        } catch (const Error& e) {
            v.status = LocalInjectivityVerdict::Status::Inconclusive;
            v.note = std::string("strip enumeration aborted: ") + e.what();
            return v;
        }
        if (strips.empty()) {
            v.status = LocalInjectivityVerdict::Status::Inconclusive;
            v.note = "empty language at depth";
            return v;
        }

        // key = (shared columns 1..sw-1, window cells of column 0)
        std::map<std::pair<std::vector<std::uint8_t>, std::vector<std::uint8_t>>,
                 std::vector<const RectPattern*>>
            groups;
        for (const auto& s : strips) {
            std::vector<std::uint8_t> shared;
            for (int j = 0; j < H; ++j)
                for (int i = 1; i < sw; ++i) shared.push_back(s.at(i, j));
            std::vector<std::uint8_t> wvals;
            for (int r : window_rows)
                if (r < H) wvals.push_back(s.at(0, r));
            auto& bucket = groups[{std::move(shared), std::move(wvals)}];
            if (bucket.size() < 2) bucket.push_back(&s);
        }

        for (const auto& [key, bucket] : groups) {
            if (bucket.size() < 2) continue;
            const RectPattern& a = *bucket[0];
            const RectPattern& b = *bucket[1];
            // Complete strip a to full width; the completion never touches
            // column 0, so swapping in b's column 0 stays admissible.
            Vec2 full{depth.x + 1, H};
            std::vector<int> fixed(static_cast<size_t>(full.area()), -1);
            for (int j = 0; j < H; ++j)
                for (int i = 0; i < sw; ++i)
                    fixed[static_cast<size_t>(j) * full.x + i] = a.at(i, j);
            std::optional<RectPattern> completed;
            try {
                enumerate_constrained(spec, full, fixed, bound, [&](const RectPattern& p) {
                    completed = p;
                    return false;
                });
            } catch (const Error& e) {
                v.status = LocalInjectivityVerdict::Status::Inconclusive;
                v.note = std::string("completion search aborted: ") + e.what();
                return v;
            }
            if (!completed) continue;
            RectPattern y = *completed;
            RectPattern z = y;
            for (int j = 0; j < H; ++j) z.at(0, j) = b.at(0, j);
            v.status = LocalInjectivityVerdict::Status::RefutedWithWitness;
            v.witness = {Pattern(y), Pattern(z)};
            v.note = stage == 0 ? "witness within the depth box"
                                : "witness one extension step beyond the depth box";
            return v;
        }
    }

    v.status = LocalInjectivityVerdict::Status::VerifiedAtDepth;
    v.note = "no witness at depth; agreement propagates one further row";
    return v;
}

LocalInjectivityVerdict kgraph_local_inj(const ModelHandle& model, int direction,
                                         const std::vector<Vec2>& window, Vec2 depth,
                                         std::uint64_t bound) {
    LocalInjectivityVerdict v;
    v.direction = direction;
    v.window = window;
    v.depth = depth;

    Vec2 wbb{0, 0};
    for (Vec2 c : window) wbb = cmax(wbb, {c.x + 1, c.y + 1});

    for (const auto& target : admissible_patterns(model, depth, bound)) {
        auto fiber = pattern_fiber(model, direction, target, bound);
        std::map<std::string, std::vector<const Pattern*>> by_window;
        for (const auto& y : fiber) {
            std::string key;
            if (wbb.area() > 0 || !window.empty()) {
                Pattern res = truncate_pattern(model, y, cmin(wbb, pattern_shape(model, y)));
                key = pattern_to_string(model, res);
            }
            by_window[key].push_back(&y);
        }
        for (const auto& [key, mates] : by_window)
            if (mates.size() >= 2) {
                v.status = LocalInjectivityVerdict::Status::RefutedWithWitness;
                v.witness = {*mates[0], *mates[1]};
                v.note = "two fiber mates share the window restriction";
                return v;
            }
    }
    v.status = LocalInjectivityVerdict::Status::VerifiedAtDepth;
    v.note = "fiber mates are separated by the window; grid completion is depth-uniform, "
             "so agreement propagates to all larger depths";
    return v;
}

LocalInjectivityVerdict circle_local_inj(const ModelHandle& model, int direction, Vec2 depth,
                                         const std::vector<Vec2>& window) {
    LocalInjectivityVerdict v;
    v.direction = direction;
    v.window = window;
    v.depth = depth;
    const CircleSpec& c = model.circle();
    long p = c.degree(direction);
    Integer n = arc_count(c, depth);
    Integer ap = p < 0 ? Integer(-p) : Integer(p);
    if (n >= ap) {
        v.status = LocalInjectivityVerdict::Status::VerifiedAtDepth;
        v.note = "subdivision arcs have length 1/" + n.get_str() +
                 " <= 1/|p|; each fiber meets every arc at most once";
    } else {
        v.status = LocalInjectivityVerdict::Status::RefutedWithWitness;
        v.witness = {Pattern(Angle(Rational(0))), Pattern(Angle(Rational(1, ap.get_ui())))};
        v.note = "two fiber points of angle 0 lie in the same depth arc";
    }
    return v;
}

} // namespace

LocalInjectivityVerdict check_local_injectivity(const ModelHandle& model, int direction,
                                                const std::vector<Vec2>& window, Vec2 depth,
                                                std::uint64_t bound) {
    if (direction != 1 && direction != 2) throw Error("bad-direction", "direction must be 1 or 2");
    if (model.kind() == ModelKind::Circle) {
        // circle depth is an arc subdivision level; (0,0) is the whole circle
        if (!depth.nonneg()) throw Error("depth-too-small", "subdivision level must be in N^2");
        return circle_local_inj(model, direction, depth, window);
    }
    if (depth.x < 1 || depth.y < 1) throw Error("depth-too-small", "depth must be >= (1,1)");
    for (Vec2 c : window)
        if (!(c.nonneg() && c.x < depth.x && c.y < depth.y))
            throw Error("window-outside-depth",
                        "window cell (" + to_string(c) + ") outside depth box " + to_string(depth));

    if (model.kind() == ModelKind::KGraph)
        return kgraph_local_inj(model, direction, window, depth, bound);
    if (direction == 1) return sft_local_inj_dir1(model, window, depth, bound);

    std::vector<Vec2> twin;
    for (Vec2 c : window) twin.push_back({c.y, c.x});
    LocalInjectivityVerdict tv =
        sft_local_inj_dir1(transpose(model), twin, {depth.y, depth.x}, bound);
    LocalInjectivityVerdict v;
    v.status = tv.status;
    v.direction = 2;
    v.window = window;
    v.depth = depth;
    v.note = tv.note;
    if (tv.witness)
        v.witness = {transpose_pattern(tv.witness->first), transpose_pattern(tv.witness->second)};
    return v;
}

OpenSurjectiveReport check_open_surjective(const ModelHandle& model, int direction, Vec2 depth,
                                           std::uint64_t bound) {
    if (direction != 1 && direction != 2) throw Error("bad-direction", "direction must be 1 or 2");
    OpenSurjectiveReport rep;

    if (model.kind() == ModelKind::Circle) {
        // z -> z^p is onto and maps arcs onto coarser arcs.
        return rep;
    }

    auto targets = admissible_patterns(model, depth, bound);
    for (const auto& t : targets) {
        if (pattern_fiber(model, direction, t, bound).empty()) {
            rep.surjective_at_depth = false;
            rep.empty_fiber_witnesses.push_back(t);
        }
    }

    // One-step openness: every admissible one-step extension u of sigma(w)
    // lifts to an extension of w itself.
    Vec2 e = unit_vec(direction);
    for (const auto& wp : targets) {
        if (!leq(e + Vec2{1, 1}, pattern_shape(model, wp) + e)) break;
        Pattern sw = shift_pattern(model, wp, e);
        Vec2 sws = pattern_shape(model, sw);
        for (int extdir = 1; extdir <= 2 && rep.open_at_depth; ++extdir) {
            Vec2 us = sws + unit_vec(extdir);
            for (const auto& u : admissible_patterns(model, us, bound)) {
                if (!pattern_eq(truncate_pattern(model, u, sws), sw)) continue;
                // Need w' of shape depth+unit(extdir) with truncate = w and shift = u.
                bool found = false;
                Vec2 ws = depth + unit_vec(extdir);
                if (model.is_symbolic()) {
                    const auto& wr = std::get<RectPattern>(wp);
                    const auto& ur = std::get<RectPattern>(u);
                    std::vector<int> fixed(static_cast<size_t>(ws.area()), -1);
                    for (int j = 0; j < wr.shape.y; ++j)
                        for (int i = 0; i < wr.shape.x; ++i)
                            fixed[static_cast<size_t>(j) * ws.x + i] = wr.at(i, j);
                    for (int j = 0; j < ur.shape.y; ++j)
                        for (int i = 0; i < ur.shape.x; ++i) {
                            int gi = i + e.x, gj = j + e.y;
                            int cur = fixed[static_cast<size_t>(gj) * ws.x + gi];
                            if (cur >= 0 && cur != ur.at(i, j)) { found = false; goto conflict; }
                            fixed[static_cast<size_t>(gj) * ws.x + gi] = ur.at(i, j);
                        }
                    enumerate_constrained(model.sft(), ws, fixed, bound,
                                          [&](const RectPattern&) { found = true; return false; });
                conflict:;
                } else {
                    for (const auto& cand : admissible_patterns(model, ws, bound)) {
                        if (pattern_eq(truncate_pattern(model, cand, depth), wp) &&
                            pattern_eq(shift_pattern(model, cand, e), u)) {
                            found = true;
                            break;
                        }
                    }
                }
                if (!found) {
                    rep.open_at_depth = false;
                    rep.open_note = "extension " + pattern_to_string(model, u) +
                                    " of the shifted part does not lift over " +
                                    pattern_to_string(model, wp);
                    break;
                }
            }
        }
        if (!rep.open_at_depth) break;
    }
    return rep;
}

OrbitReachReport orbit_reach(const ModelHandle& model, const Pattern& seed, Vec2 kBound,
                             Vec2 depth, std::uint64_t bound) {
    OrbitReachReport rep;
    std::vector<Pattern> all = admissible_patterns(model, depth, bound);
    rep.admissible_count = static_cast<long>(all.size());

    auto less = [](const Pattern& a, const Pattern& b) { return pattern_less(a, b); };
    std::set<Pattern, decltype(less)> reached(less);

    if (model.kind() == ModelKind::Circle && std::holds_alternative<Angle>(seed)) {
        const Angle& a = std::get<Angle>(seed);
        for (int kx = 0; kx <= kBound.x; ++kx)
            for (int ky = 0; ky <= kBound.y; ++ky) {
                Vec2 k{kx, ky};
                Angle image = circle_apply(model.circle(), k, a);
                Integer pk = arc_count(model.circle(), k);
                for (Integer t = 0; t < pk; ++t) {
                    Angle y(Rational((image.value + Rational(t)) / Rational(pk)));
                    reached.insert(arc_of_angle(model.circle(), depth, y));
                }
            }
    } else {
        Vec2 ss = pattern_shape(model, seed);
        if (!leq(kBound + Vec2{1, 1}, ss))
            throw Error("seed-too-small",
                        "seed shape " + to_string(ss) + " must exceed kBound " + to_string(kBound));
        for (int kx = 0; kx <= kBound.x; ++kx)
            for (int ky = 0; ky <= kBound.y; ++ky) {
                Vec2 k{kx, ky};
                Pattern tk = shift_pattern(model, seed, k);
                Vec2 ts = pattern_shape(model, tk);
                Vec2 ys = cmax(depth + k, ss);
                if (model.is_symbolic()) {
                    const auto& tr = std::get<RectPattern>(tk);
                    std::vector<int> fixed(static_cast<size_t>(ys.area()), -1);
                    for (int j = 0; j < ts.y; ++j)
                        for (int i = 0; i < ts.x; ++i)
                            fixed[static_cast<size_t>(j + k.y) * ys.x + (i + k.x)] = tr.at(i, j);
                    enumerate_constrained(model.sft(), ys, fixed, bound, [&](const RectPattern& y) {
                        reached.insert(truncate_pattern(model, Pattern(y), depth));
                        return true;
                    });
                } else {
                    for (const auto& y : admissible_patterns(model, ys, bound)) {
                        Pattern sy = shift_pattern(model, y, k);
                        if (pattern_eq(truncate_pattern(model, sy, ts), tk))
                            reached.insert(truncate_pattern(model, y, depth));
                    }
                }
            }
    }

    rep.reached.assign(reached.begin(), reached.end());
    rep.full = rep.reached.size() == all.size();
    return rep;
}

PeriodicityReport periodicity_diagnostic(const ModelHandle& model, Vec2 p, Vec2 q, Vec2 depth,
                                         std::uint64_t bound) {
    if (p == q) throw Error("bad-exponents", "periodicity diagnostic requires p != q");
    PeriodicityReport rep;
    rep.p = p;
    rep.q = q;
    rep.depth = depth;

    if (model.kind() == ModelKind::Circle) {
        const CircleSpec& c = model.circle();
        auto pw = [&](Vec2 k) {
            Integer r = 1;
            for (int i = 0; i < k.x; ++i) r *= c.p1;
            for (int i = 0; i < k.y; ++i) r *= c.p2;
            return r;
        };
        Integer d = pw(p) - pw(q);
        if (d == 0) {
            rep.all_points_periodic = true;
            rep.evidence_positive = false;
            return rep;
        }
        Integer ad = d < 0 ? Integer(-d) : d;
        rep.consistent_count = ad;
        for (Integer t = 0; t < ad && t < 16; ++t)
            rep.consistent.push_back(Angle(Rational(t, ad.get_ui())));
        rep.evidence_positive = true;  // finitely many exact solutions
        return rep;
    }

    Vec2 need = cmax(p, q) + Vec2{1, 1};
    if (!leq(need, depth))
        throw Error("depth-too-small", "depth must be at least " + to_string(need));

    auto all = admissible_patterns(model, depth, bound);
    auto agrees = [&](const Pattern& w, Vec2 shape_hint) {
        (void)shape_hint;
        Pattern a = shift_pattern(model, w, p);
        Pattern b = shift_pattern(model, w, q);
        Vec2 ov = cmin(pattern_shape(model, a), pattern_shape(model, b));
        return pattern_eq(truncate_pattern(model, a, ov), truncate_pattern(model, b, ov));
    };

    for (const auto& w : all)
        if (agrees(w, depth)) rep.consistent.push_back(w);
    rep.consistent_count = static_cast<long>(rep.consistent.size());

    Vec2 big = depth + Vec2{1, 1};
    for (const auto& w : rep.consistent) {
        bool breaking = false;
        if (model.is_symbolic()) {
            const auto& wr = std::get<RectPattern>(w);
            std::vector<int> fixed(static_cast<size_t>(big.area()), -1);
            for (int j = 0; j < depth.y; ++j)
                for (int i = 0; i < depth.x; ++i)
                    fixed[static_cast<size_t>(j) * big.x + i] = wr.at(i, j);
            enumerate_constrained(model.sft(), big, fixed, bound, [&](const RectPattern& y) {
                if (!agrees(Pattern(y), big)) {
                    breaking = true;
                    return false;
                }
                return true;
            });
        } else {
            for (const auto& y : admissible_patterns(model, big, bound)) {
                if (!pattern_eq(truncate_pattern(model, y, depth), w)) continue;
                if (!agrees(y, big)) {
                    breaking = true;
                    break;
                }
            }
        }
        if (!breaking) rep.stuck.push_back(w);
    }
    rep.evidence_positive = rep.stuck.empty();
    rep.all_points_periodic =
        rep.consistent.size() == all.size() && rep.stuck.size() == rep.consistent.size() &&
        !rep.consistent.empty();
    return rep;
}

std::optional<std::vector<Vec2>> smallest_verified_window(const ModelHandle& model, int direction,
                                                          Vec2 depth, Vec2 window_cap,
                                                          std::uint64_t bound) {
    std::vector<Vec2> rects;
    for (int a = 0; a <= window_cap.x; ++a)
        for (int b = 0; b <= window_cap.y; ++b) {
            if ((a == 0) != (b == 0)) continue;  // only the empty rectangle has area 0
            if (a > depth.x || b > depth.y) continue;
            rects.push_back({a, b});
        }
    std::sort(rects.begin(), rects.end(), [](Vec2 u, Vec2 v) {
        if (u.area() != v.area()) return u.area() < v.area();
        if (u.x != v.x) return u.x < v.x;
        return u.y < v.y;
    });
    for (Vec2 r : rects) {
        std::vector<Vec2> cells;
        for (int j = 0; j < r.y; ++j)
            for (int i = 0; i < r.x; ++i) cells.push_back({i, j});
        auto verdict = check_local_injectivity(model, direction, cells, depth, bound);
        if (verdict.status == LocalInjectivityVerdict::Status::VerifiedAtDepth) return cells;
    }
    return std::nullopt;
}

} // namespace r2d
