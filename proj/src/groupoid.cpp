#include "r2d/groupoid.hpp"

#include "r2d/shifts.hpp"

#include <algorithm>
#include <map>

namespace r2d {

namespace {

bool overlap_equal(const ModelHandle& model, const Pattern& a, const Pattern& b) {
    Vec2 ov = cmin(pattern_shape(model, a), pattern_shape(model, b));
    if (ov.x <= 0 || ov.y <= 0) return false;  // empty overlap certifies nothing
    return pattern_eq(truncate_pattern(model, a, ov), truncate_pattern(model, b, ov));
}

} // namespace

GroupoidElementApprox make_element(const ModelHandle& model, Vec2 p, Vec2 q, const Pattern& x,
                                   const Pattern& y) {
    if (!p.nonneg() || !q.nonneg()) throw Error("bad-shape", "p and q must lie in N^2");
    if (pattern_shape(model, x) != pattern_shape(model, y))
        throw Error("incompatible-pair", "x and y must share a common depth");
    Pattern sx = apply_shift(model, x, p);
    Pattern sy = apply_shift(model, y, q);
    if (!overlap_equal(model, sx, sy))
        throw Error("incompatible-pair", "sigma^p x != sigma^q y on the overlap rectangle");
    return {p, q, x, y, p - q};
}

GroupoidElementApprox unit_element(const ModelHandle& model, const Pattern& x) {
    return make_element(model, {0, 0}, {0, 0}, x, x);
}

GroupoidElementApprox compose_elements(const ModelHandle& model, const GroupoidElementApprox& g,
                                       const GroupoidElementApprox& h) {
    if (!pattern_eq(g.y, h.x))
        throw Error("non-composable", "range pattern of h differs from source pattern of g");
    return make_element(model, g.p + h.p, g.q + h.q, g.x, h.y);
}

GroupoidElementApprox invert_element(const GroupoidElementApprox& g) {
    return {g.q, g.p, g.y, g.x, g.q - g.p};
}

RnPartition rn_classes(const ModelHandle& model, Vec2 n, Vec2 depth, std::uint64_t bound) {
    if (!n.nonneg()) throw Error("bad-shape", "n must lie in N^2");
    if (!leq(n + Vec2{1, 1}, depth + Vec2{1, 1}) || !leq(n, depth))
        throw Error("depth-too-small", "rn_classes needs depth >= n componentwise");
    RnPartition part;
    part.n = n;
    part.depth = depth;
    part.basis = PatternBasis::make(model, depth, bound);

    std::map<std::string, std::vector<int>> by_key;
    for (size_t i = 0; i < part.basis->size(); ++i) {
        Pattern s = shift_pattern(model, part.basis->patterns[i], n);
        by_key[pattern_to_string(model, s)].push_back(static_cast<int>(i));
    }
    std::vector<std::vector<int>> classes;
    for (auto& [key, members] : by_key) classes.push_back(std::move(members));
    std::sort(classes.begin(), classes.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    part.class_of.assign(part.basis->size(), -1);
    for (size_t c = 0; c < classes.size(); ++c)
        for (int i : classes[c]) part.class_of[static_cast<size_t>(i)] = static_cast<int>(c);
    part.classes = std::move(classes);
    return part;
}

RnAlgebraDescription rn_algebra_description(const ModelHandle& model, Vec2 n, Vec2 depth,
                                            std::uint64_t bound) {
    RnAlgebraDescription d;
    d.n = n;
    d.depth = depth;
    if (model.kind() == ModelKind::Circle) {
        d.base = RnAlgebraDescription::Base::Circle;
        d.circle_matrix_size = arc_count(model.circle(), n);
        return d;
    }
    RnPartition part = rn_classes(model, n, depth, bound);
    for (const auto& cls : part.classes) d.block_sizes.push_back(Integer(cls.size()));
    if (model.kind() == ModelKind::FullShift) {
        d.base = RnAlgebraDescription::Base::NonDiscrete;
        FiberMeasureSystem mu = default_measure(model);
        const auto& dm = mu.dir1;
        for (const auto& cls : part.classes) {
            Rational m(0);
            for (int i : cls) {
                const auto& rp = std::get<RectPattern>(part.basis->patterns[static_cast<size_t>(i)]);
                Rational w(1);
                for (std::uint8_t s : rp.cells) w *= dm.symbol_weights[s];
                m += w;
            }
            d.class_measures.push_back(m);
        }
    }
    return d;
}

namespace {

std::vector<Integer> distinct_sizes(const std::vector<std::vector<int>>& classes) {
    std::vector<Integer> sizes;
    for (const auto& c : classes) sizes.push_back(Integer(c.size()));
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
    return sizes;
}

int type_of(const std::vector<Integer>& types, size_t size) {
    Integer s(size);
    auto it = std::lower_bound(types.begin(), types.end(), s);
    return static_cast<int>(it - types.begin());
}

} // namespace

InclusionMultiplicity rn_inclusion_multiplicity(const ModelHandle& model, Vec2 n, Vec2 m,
                                                Vec2 depth, std::uint64_t bound) {
    if (!leq(n, m)) throw Error("non-comparable-n-m", "need n <= m componentwise");
    if (model.kind() == ModelKind::Circle) {
        InclusionMultiplicity inc;
        inc.from_sizes = {arc_count(model.circle(), n)};
        inc.to_sizes = {arc_count(model.circle(), m)};
        inc.mult = IntMat(1, 1);
        inc.mult(0, 0) = inc.to_sizes[0] / inc.from_sizes[0];
        return inc;
    }

    RnPartition pn = rn_classes(model, n, depth, bound);
    RnPartition pm = rn_classes(model, m, depth, bound);

    InclusionMultiplicity inc;
    inc.from_sizes = distinct_sizes(pn.classes);
    inc.to_sizes = distinct_sizes(pm.classes);

    // R_n refines R_m: every n-class sits inside a unique m-class.
    std::vector<int> parent(pn.classes.size(), -1);
    for (size_t c = 0; c < pn.classes.size(); ++c) {
        for (int i : pn.classes[c]) {
            int pc = pm.class_of[static_cast<size_t>(i)];
            if (parent[c] < 0)
                parent[c] = pc;
            else if (parent[c] != pc)
                throw Error("refinement-violation", "an R_n-class crosses two R_m-classes");
        }
    }

    // Count subclass types per m-class and require uniformity per m-type.
    std::vector<std::vector<Integer>> counts(pm.classes.size(),
                                             std::vector<Integer>(inc.from_sizes.size(), Integer(0)));
    for (size_t c = 0; c < pn.classes.size(); ++c)
        counts[static_cast<size_t>(parent[c])][static_cast<size_t>(
            type_of(inc.from_sizes, pn.classes[c].size()))] += 1;

    inc.mult = IntMat(inc.to_sizes.size(), inc.from_sizes.size());
    inc.mult.setConstant(Integer(-1));
    for (size_t b = 0; b < pm.classes.size(); ++b) {
        int bt = type_of(inc.to_sizes, pm.classes[b].size());
        for (size_t a = 0; a < inc.from_sizes.size(); ++a) {
            Integer& cell = inc.mult(bt, static_cast<Eigen::Index>(a));
            if (cell == -1)
                cell = counts[b][a];
            else if (cell != counts[b][a])
                throw Error("inclusion-not-type-uniform",
                            "subclass composition varies across classes of one block type");
        }
    }
    return inc;
}

Rational fiber_weight_pow(const ModelHandle& model, const FiberMeasureSystem& mu,
                          const Pattern& z, Vec2 n) {
    Rational w(1);
    Pattern cur = z;
    auto step = [&](int dir) {
        Pattern image = shift_pattern(model, cur, unit_vec(dir));
        auto wf = weighted_fiber(model, mu, dir, image);
        for (const auto& [y, wy] : wf)
            if (pattern_eq(y, cur)) {
                w *= wy;
                cur = image;
                return;
            }
        throw Error("bad-basis", "pattern missing from its own fiber");
    };
    for (int i = 0; i < n.x; ++i) step(1);
    for (int j = 0; j < n.y; ++j) step(2);
    return w;
}

KernelFunction kernel_zero(const ModelHandle& model, const FiberMeasureSystem& mu, Vec2 n,
                           Vec2 depth, std::uint64_t bound) {
    KernelFunction k;
    k.model = model;
    k.mu = mu;
    k.n = n;
    k.partition = rn_classes(model, n, depth, bound);
    for (const auto& cls : k.partition.classes) {
        CMat block(cls.size(), cls.size());
        for (Eigen::Index i = 0; i < block.rows(); ++i)
            for (Eigen::Index j = 0; j < block.cols(); ++j) block(i, j) = CRat(0);
        k.blocks.push_back(std::move(block));
        std::vector<Rational> ws;
        for (int idx : cls)
            ws.push_back(fiber_weight_pow(model, mu,
                                          k.partition.basis->patterns[static_cast<size_t>(idx)], n));
        k.weights.push_back(std::move(ws));
    }
    return k;
}

KernelFunction kernel_identity(const ModelHandle& model, const FiberMeasureSystem& mu, Vec2 n,
                               Vec2 depth, std::uint64_t bound) {
    // Identity for convolution: k(x,x) = 1/w(x).
    KernelFunction k = kernel_zero(model, mu, n, depth, bound);
    for (size_t c = 0; c < k.blocks.size(); ++c)
        for (Eigen::Index i = 0; i < k.blocks[c].rows(); ++i)
            k.blocks[c](i, i) = CRat(Rational(1 / k.weights[c][static_cast<size_t>(i)]));
    return k;
}

namespace {

void require_same_shape(const KernelFunction& a, const KernelFunction& b) {
    if (a.n != b.n) throw Error("shape-mismatch", "kernels live on different R_n");
    if (a.partition.depth != b.partition.depth)
        throw Error("depth-mismatch", "kernels at different depths");
}

} // namespace

KernelFunction kernel_convolve(const KernelFunction& k1, const KernelFunction& k2) {
    require_same_shape(k1, k2);
    KernelFunction out = k1;
    for (size_t c = 0; c < out.blocks.size(); ++c) {
        const CMat& a = k1.blocks[c];
        const CMat& b = k2.blocks[c];
        CMat w = CMat(a.rows(), a.cols());
        for (Eigen::Index i = 0; i < w.rows(); ++i)
            for (Eigen::Index j = 0; j < w.cols(); ++j)
                w(i, j) = i == j ? CRat(k1.weights[c][static_cast<size_t>(i)]) : CRat(0);
        out.blocks[c] = CMat(a * w * b);
    }
    return out;
}

KernelFunction kernel_add(const KernelFunction& k1, const KernelFunction& k2) {
    require_same_shape(k1, k2);
    KernelFunction out = k1;
    for (size_t c = 0; c < out.blocks.size(); ++c) out.blocks[c] = CMat(out.blocks[c] + k2.blocks[c]);
    return out;
}

OperatorMatrix kernel_to_block_matrix(const KernelFunction& k) {
    for (size_t c = 0; c < k.blocks.size(); ++c)
        for (const Rational& w : k.weights[c])
            if (w != k.weights[c][0])
                throw Error("weights-not-class-constant",
                            "block representation requires the mu^n weight to be constant per class");
    OperatorMatrix m;
    m.tag = OperatorMatrix::Tag::ThetaKernel;
    m.domain = BasisRef::patterns(k.partition.basis);
    m.codomain = m.domain;
    Eigen::Index dim = static_cast<Eigen::Index>(k.partition.basis->size());
    m.entries = CMat(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) m.entries(i, j) = CRat(0);
    for (size_t c = 0; c < k.blocks.size(); ++c) {
        const auto& cls = k.partition.classes[c];
        for (size_t i = 0; i < cls.size(); ++i)
            for (size_t j = 0; j < cls.size(); ++j)
                m.entries(cls[i], cls[j]) = k.weights[c][0] * k.blocks[c](
                                                static_cast<Eigen::Index>(i),
                                                static_cast<Eigen::Index>(j));
    }
    return m;
}

KernelFunction block_matrix_to_kernel(const OperatorMatrix& m, const KernelFunction& shape_like) {
    KernelFunction k = kernel_zero(shape_like.model, shape_like.mu, shape_like.n,
                                   shape_like.partition.depth);
    for (size_t c = 0; c < k.blocks.size(); ++c) {
        const auto& cls = k.partition.classes[c];
        Rational w = k.weights[c][0];
        for (size_t i = 0; i < cls.size(); ++i)
            for (size_t j = 0; j < cls.size(); ++j)
                k.blocks[c](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    Rational(1 / w) * m.entries(cls[i], cls[j]);
    }
    return k;
}

OperatorMatrix kernel_operator(const KernelFunction& k) {
    OperatorMatrix m;
    m.tag = OperatorMatrix::Tag::ThetaKernel;
    m.domain = BasisRef::patterns(k.partition.basis);
    m.codomain = m.domain;
    Eigen::Index dim = static_cast<Eigen::Index>(k.partition.basis->size());
    m.entries = CMat(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) m.entries(i, j) = CRat(0);
    for (size_t c = 0; c < k.blocks.size(); ++c) {
        const auto& cls = k.partition.classes[c];
        for (size_t i = 0; i < cls.size(); ++i)
            for (size_t j = 0; j < cls.size(); ++j)
                m.entries(cls[i], cls[j]) = CRat(k.weights[c][static_cast<size_t>(j)]) *
                                            k.blocks[c](static_cast<Eigen::Index>(i),
                                                        static_cast<Eigen::Index>(j));
    }
    return m;
}

CylinderFunction kernel_apply(const KernelFunction& k, const CylinderFunction& f) {
    if (f.backend() != CylinderFunction::Backend::PatternValues ||
        f.basis()->depth != k.partition.depth)
        throw Error("depth-mismatch", "kernel and function disagree on depth");
    OperatorMatrix op = kernel_operator(k);
    return CylinderFunction::from_values(k.partition.basis, CVec(op.entries * f.values()));
}

bool exactly_equal(const KernelFunction& a, const KernelFunction& b) {
    if (a.n != b.n || a.partition.depth != b.partition.depth) return false;
    if (a.blocks.size() != b.blocks.size()) return false;
    for (size_t c = 0; c < a.blocks.size(); ++c)
        if (!exactly_equal(a.blocks[c], b.blocks[c])) return false;
    return true;
}

} // namespace r2d
