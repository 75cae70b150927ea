#include "r2d/model.hpp"

#include <algorithm>

namespace r2d {

std::string to_string(ModelKind k) {
    switch (k) {
        case ModelKind::Sft: return "sft";
        case ModelKind::KGraph: return "kgraph";
        case ModelKind::Circle: return "circle";
        case ModelKind::FullShift: return "fullshift";
    }
    return "?";
}

bool pattern_less(const Pattern& a, const Pattern& b) {
    if (a.index() != b.index()) return a.index() < b.index();
    return std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            return x < std::get<T>(b);
        },
        a);
}

bool pattern_eq(const Pattern& a, const Pattern& b) {
    if (a.index() != b.index()) return false;
    return std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            return x == std::get<T>(b);
        },
        a);
}

ModelHandle ModelHandle::make_sft(SftSpec spec) {
    ModelHandle m;
    m.kind_ = ModelKind::Sft;
    m.sft_ = std::make_shared<const SftSpec>(std::move(spec));
    return m;
}

ModelHandle ModelHandle::make_full_shift(std::vector<std::string> alphabet) {
    ModelHandle m;
    m.kind_ = ModelKind::FullShift;
    m.sft_ = std::make_shared<const SftSpec>(full_shift_spec(alphabet));
    return m;
}

ModelHandle ModelHandle::make_kgraph(Rank2Graph g) {
    ModelHandle m;
    m.kind_ = ModelKind::KGraph;
    m.graph_ = std::make_shared<const Rank2Graph>(std::move(g));
    return m;
}

ModelHandle ModelHandle::make_circle(long p1, long p2) {
    ModelHandle m;
    m.kind_ = ModelKind::Circle;
    m.circle_ = std::make_shared<const CircleSpec>(CircleSpec{p1, p2});
    return m;
}

ModelHandle build_model(const SftSpec& spec) {
    SftSpec s = spec;
    s.normalize();
    ValidationReport rep = validate_sft(s, s.window_bbox());
    if (!rep.ok) throw Error(rep.issues.front().code, rep.issues.front().detail);
    return ModelHandle::make_sft(std::move(s));
}

ModelHandle build_model(const Rank2Graph& g) {
    Rank2Graph copy = g;
    ValidationReport rep = validate_rank2_graph(copy);
    if (!rep.ok) throw Error(rep.issues.front().code, rep.issues.front().detail);
    return ModelHandle::make_kgraph(std::move(copy));
}

ModelHandle build_model_circle(long p1, long p2) {
    if (std::abs(p1) < 2 || std::abs(p2) < 2)
        throw Error("bad-degree", "covering degrees must satisfy |p| >= 2");
    return ModelHandle::make_circle(p1, p2);
}

ModelHandle build_model_full_shift(const std::vector<std::string>& alphabet) {
    if (alphabet.empty()) throw Error("empty-alphabet", "full shift needs a nonempty alphabet");
    return ModelHandle::make_full_shift(alphabet);
}

FiberMeasureSystem FiberMeasureSystem::counting() { return {}; }

FiberMeasureSystem FiberMeasureSystem::uniform_product(size_t alphabet_size) {
    std::vector<Rational> w(alphabet_size, Rational(1, static_cast<unsigned long>(alphabet_size)));
    return product(w, w);
}

FiberMeasureSystem FiberMeasureSystem::product(std::vector<Rational> w1, std::vector<Rational> w2) {
    FiberMeasureSystem mu;
    mu.dir1.mode = DirectionMeasure::Mode::ProductWeights;
    mu.dir1.symbol_weights = std::move(w1);
    mu.dir2.mode = DirectionMeasure::Mode::ProductWeights;
    mu.dir2.symbol_weights = std::move(w2);
    return mu;
}

void validate_measure(const ModelHandle& model, const FiberMeasureSystem& mu) {
    for (int d = 1; d <= 2; ++d) {
        const auto& dm = mu.direction(d);
        if (dm.mode == DirectionMeasure::Mode::CountingNormalized) continue;
        if (!model.is_symbolic())
            throw Error("bad-measure", "product weights require a symbolic model");
        if (dm.symbol_weights.size() != model.sft().alphabet.size())
            throw Error("bad-measure", "one weight per alphabet symbol required");
        Rational sum(0);
        for (const auto& w : dm.symbol_weights) {
            if (sgn(w) <= 0) throw Error("bad-measure", "weights must be positive (full support)");
            sum += w;
        }
        if (sum != 1) throw Error("bad-measure", "symbol weights must sum to 1");
    }
}

FiberMeasureSystem default_measure(const ModelHandle& model) {
    if (model.kind() == ModelKind::FullShift)
        return FiberMeasureSystem::uniform_product(model.sft().alphabet.size());
    return FiberMeasureSystem::counting();
}

std::vector<Pattern> admissible_patterns(const ModelHandle& model, Vec2 shape,
                                         std::uint64_t bound) {
    std::vector<Pattern> out;
    switch (model.kind()) {
        case ModelKind::Sft:
        case ModelKind::FullShift: {
            for (auto& p : enumerate_patterns(model.sft(), shape, bound)) out.emplace_back(std::move(p));
            break;
        }
        case ModelKind::KGraph: {
            for (auto& g : grids_of_shape(model.graph(), shape)) out.emplace_back(std::move(g));
            break;
        }
        case ModelKind::Circle: {
            Integer n = arc_count(model.circle(), shape);
            if (n > Integer(static_cast<unsigned long>(bound)))
                throw Error("shape-overflow", "arc count exceeds candidate bound");
            for (Integer t = 0; t < n; ++t) out.emplace_back(ArcPattern{shape, t});
            break;
        }
    }
    return out;  // each branch already emits sorted output
}

Vec2 pattern_shape(const ModelHandle& model, const Pattern& p) {
    (void)model;
    if (const auto* r = std::get_if<RectPattern>(&p)) return r->shape;
    if (const auto* g = std::get_if<GridPattern>(&p)) return g->shape;
    if (const auto* a = std::get_if<ArcPattern>(&p)) return a->level;
    throw Error("bad-pattern", "angle points carry no shape");
}

namespace {

RectPattern rect_shift(const RectPattern& p, Vec2 k) {
    Vec2 ns = p.shape - k;
    if (!k.nonneg() || ns.x < 0 || ns.y < 0)
        throw Error("shape-underflow", "shift exceeds pattern shape");
    RectPattern q;
    q.shape = ns;
    q.cells.resize(static_cast<size_t>(ns.area()));
    for (int j = 0; j < ns.y; ++j)
        for (int i = 0; i < ns.x; ++i) q.at(i, j) = p.at(i + k.x, j + k.y);
    return q;
}

RectPattern rect_truncate(const RectPattern& p, Vec2 shape) {
    if (!leq(shape, p.shape)) throw Error("shape-underflow", "truncation larger than pattern");
    RectPattern q;
    q.shape = shape;
    q.cells.resize(static_cast<size_t>(shape.area()));
    for (int j = 0; j < shape.y; ++j)
        for (int i = 0; i < shape.x; ++i) q.at(i, j) = p.at(i, j);
    return q;
}

} // namespace

Pattern shift_pattern(const ModelHandle& model, const Pattern& p, Vec2 k) {
    if (const auto* r = std::get_if<RectPattern>(&p)) return rect_shift(*r, k);
    if (const auto* g = std::get_if<GridPattern>(&p)) return grid_shift(model.graph(), *g, k);
    if (const auto* a = std::get_if<ArcPattern>(&p)) return arc_shift(model.circle(), *a, k);
    return Pattern(circle_apply(model.circle(), k, std::get<Angle>(p)));
}

Pattern truncate_pattern(const ModelHandle& model, const Pattern& p, Vec2 shape) {
    if (const auto* r = std::get_if<RectPattern>(&p)) return rect_truncate(*r, shape);
    if (const auto* g = std::get_if<GridPattern>(&p)) return grid_truncate(model.graph(), *g, shape);
    if (const auto* a = std::get_if<ArcPattern>(&p)) return arc_truncate(model.circle(), *a, shape);
    throw Error("bad-pattern", "cannot truncate an angle point");
}

std::vector<Pattern> pattern_fiber(const ModelHandle& model, int direction, const Pattern& target,
                                   std::uint64_t bound) {
    std::vector<Pattern> out;
    if (const auto* r = std::get_if<RectPattern>(&target)) {
        Vec2 big = r->shape + unit_vec(direction);
        Vec2 off = unit_vec(direction);
        std::vector<int> fixed(static_cast<size_t>(big.area()), -1);
        for (int j = 0; j < r->shape.y; ++j)
            for (int i = 0; i < r->shape.x; ++i)
                fixed[static_cast<size_t>(j + off.y) * big.x + (i + off.x)] = r->at(i, j);
        enumerate_constrained(model.sft(), big, fixed, bound, [&](const RectPattern& p) {
            out.emplace_back(p);
            return true;
        });
    } else if (const auto* g = std::get_if<GridPattern>(&target)) {
        for (auto& q : grid_fiber(model.graph(), *g, direction)) out.emplace_back(std::move(q));
    } else if (const auto* a = std::get_if<ArcPattern>(&target)) {
        for (auto& q : arc_fiber(model.circle(), direction, *a)) out.emplace_back(std::move(q));
    } else {
        for (auto& q : circle_point_fiber(model.circle(), direction, std::get<Angle>(target)))
            out.emplace_back(std::move(q));
    }
    return out;
}

std::vector<std::pair<Pattern, Rational>> weighted_fiber(const ModelHandle& model,
                                                         const FiberMeasureSystem& mu,
                                                         int direction, const Pattern& target,
                                                         std::uint64_t bound) {
    auto fiber = pattern_fiber(model, direction, target, bound);
    std::vector<std::pair<Pattern, Rational>> out;
    if (fiber.empty()) return out;

    const auto& dm = mu.direction(direction);
    if (dm.mode == DirectionMeasure::Mode::CountingNormalized || !model.is_symbolic()) {
        Rational w(1, static_cast<unsigned long>(fiber.size()));
        for (auto& y : fiber) out.emplace_back(std::move(y), w);
        return out;
    }

    // Product weights over the new cells, normalized over the fiber.
    Vec2 off = unit_vec(direction);
    std::vector<Rational> raw;
    Rational total(0);
    for (const auto& y : fiber) {
        const auto& ry = std::get<RectPattern>(y);
        Rational w(1);
        if (direction == 1) {
            for (int j = 0; j < ry.shape.y; ++j) w *= dm.symbol_weights[ry.at(0, j)];
        } else {
            for (int i = 0; i < ry.shape.x; ++i) w *= dm.symbol_weights[ry.at(i, 0)];
        }
        (void)off;
        total += w;
        raw.push_back(std::move(w));
    }
    for (size_t i = 0; i < fiber.size(); ++i)
        out.emplace_back(std::move(fiber[i]), Rational(raw[i] / total));
    return out;
}

ModelHandle transpose(const ModelHandle& model) {
    switch (model.kind()) {
        case ModelKind::Sft: return ModelHandle::make_sft(transpose(model.sft()));
        case ModelKind::FullShift: {
            ModelHandle m = ModelHandle::make_full_shift(model.sft().alphabet);
            return m;
        }
        case ModelKind::KGraph: return ModelHandle::make_kgraph(transpose(model.graph()));
        case ModelKind::Circle: {
            const auto& c = model.circle();
            return ModelHandle::make_circle(c.p2, c.p1);
        }
    }
    throw Error("bad-model", "unreachable");
}

Pattern transpose_pattern(const Pattern& p) {
    if (const auto* r = std::get_if<RectPattern>(&p)) return transpose(*r);
    if (const auto* g = std::get_if<GridPattern>(&p)) return transpose(*g);
    if (const auto* a = std::get_if<ArcPattern>(&p)) return ArcPattern{{a->level.y, a->level.x}, a->index};
    return p;  // angles are self-transpose
}

std::string pattern_to_string(const ModelHandle& model, const Pattern& p) {
    if (const auto* r = std::get_if<RectPattern>(&p)) return pattern_to_string(model.sft(), *r);
    if (const auto* g = std::get_if<GridPattern>(&p)) return grid_to_string(model.graph(), *g);
    if (const auto* a = std::get_if<ArcPattern>(&p))
        return "arc[" + a->index.get_str() + "/" + arc_count(model.circle(), a->level).get_str() +
               "@" + to_string(a->level) + "]";
    return "angle[" + rational_to_string(std::get<Angle>(p).value) + "]";
}

} // namespace r2d
