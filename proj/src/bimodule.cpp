#include "r2d/bimodule.hpp"

#include <algorithm>

namespace r2d {

namespace {

long laurent_span(Vec2 depth) { return std::max(depth.x, depth.y); }

long abs_degree(const ModelHandle& model, int direction) {
    long p = model.circle().degree(direction);
    return p < 0 ? -p : p;
}

} // namespace

OperatorMatrix expectation_matrix(const ModelHandle& model, const FiberMeasureSystem& mu,
                                  int direction, Vec2 depth, std::uint64_t bound) {
    validate_measure(model, mu);
    if (model.kind() == ModelKind::Circle) {
        long k = laurent_span(depth);
        BasisRef span = BasisRef::laurent_span(-k, k);
        return materialize([&](const CylinderFunction& f) { return apply_expectation(f, mu, direction); },
                           model, span, span, OperatorMatrix::Tag::Expectation);
    }
    if ((direction == 1 && depth.x < 1) || (direction == 2 && depth.y < 1))
        throw Error("depth-too-small", "expectation needs depth >= 1 in its direction");
    BasisRef b = BasisRef::patterns(PatternBasis::make(model, depth, bound));
    return materialize([&](const CylinderFunction& f) { return apply_expectation(f, mu, direction); },
                       model, b, b, OperatorMatrix::Tag::Expectation);
}

OperatorMatrix transfer_matrix(const ModelHandle& model, const FiberMeasureSystem& mu,
                               int direction, Vec2 depth, std::uint64_t bound) {
    validate_measure(model, mu);
    if (model.kind() == ModelKind::Circle) {
        long k = laurent_span(depth);
        long kk = k / abs_degree(model, direction);
        return materialize([&](const CylinderFunction& f) { return apply_transfer(f, mu, direction); },
                           model, BasisRef::laurent_span(-k, k), BasisRef::laurent_span(-kk, kk),
                           OperatorMatrix::Tag::Transfer);
    }
    if ((direction == 1 && depth.x < 1) || (direction == 2 && depth.y < 1))
        throw Error("depth-too-small", "transfer needs depth >= 1 in its direction");
    BasisRef dom = BasisRef::patterns(PatternBasis::make(model, depth, bound));
    BasisRef cod = BasisRef::patterns(PatternBasis::make(model, depth - unit_vec(direction), bound));
    return materialize([&](const CylinderFunction& f) { return apply_transfer(f, mu, direction); },
                       model, dom, cod, OperatorMatrix::Tag::Transfer);
}

OperatorMatrix alpha_matrix(const ModelHandle& model, int direction, Vec2 depth,
                            std::uint64_t bound) {
    if (model.kind() == ModelKind::Circle) {
        long k = laurent_span(depth);
        long kk = k * abs_degree(model, direction);
        return materialize([&](const CylinderFunction& f) { return apply_alpha(f, direction); },
                           model, BasisRef::laurent_span(-k, k), BasisRef::laurent_span(-kk, kk),
                           OperatorMatrix::Tag::Endomorphism);
    }
    BasisRef dom = BasisRef::patterns(PatternBasis::make(model, depth, bound));
    BasisRef cod = BasisRef::patterns(PatternBasis::make(model, depth + unit_vec(direction), bound));
    return materialize([&](const CylinderFunction& f) { return apply_alpha(f, direction); }, model,
                       dom, cod, OperatorMatrix::Tag::Endomorphism);
}

OperatorMatrix left_action_matrix(const CylinderFunction& f, Vec2 depth, std::uint64_t bound) {
    if (f.backend() == CylinderFunction::Backend::Laurent) {
        long k = laurent_span(depth);
        long width = 0;
        for (const auto& [e, c] : f.coeffs())
            if (!c.is_zero()) width = std::max(width, e < 0 ? -e : e);
        return materialize([&](const CylinderFunction& g) { return mul(f, g); }, f.model(),
                           BasisRef::laurent_span(-k, k),
                           BasisRef::laurent_span(-k - width, k + width),
                           OperatorMatrix::Tag::LeftAction);
    }
    CylinderFunction fe = embed_to_depth(f, depth);
    BasisRef b = BasisRef::patterns(PatternBasis::make(f.model(), depth, bound));
    return materialize([&](const CylinderFunction& g) { return mul(fe, g); }, f.model(), b, b,
                       OperatorMatrix::Tag::LeftAction);
}

std::vector<FrameElement> frame_compute(const ModelHandle& model, const FiberMeasureSystem& mu,
                                        int direction, Vec2 depth, std::uint64_t bound) {
    validate_measure(model, mu);
    if (model.kind() == ModelKind::Circle) {
        std::vector<FrameElement> frame;
        long p = abs_degree(model, direction);
        for (long i = 0; i < p; ++i)
            frame.push_back({CylinderFunction::monomial(model, i), Rational(1)});
        return frame;
    }
    if (mu.direction(direction).mode != DirectionMeasure::Mode::CountingNormalized)
        throw Error("bad-measure", "frames are defined for counting-normalized weights");

    Vec2 e = unit_vec(direction);
    Vec2 target_depth = depth - e;
    if (target_depth.x < 0 || target_depth.y < 0)
        throw Error("depth-too-small", "frame depth must exceed the direction unit");

    Vec2 cap = cmin(Vec2{2, 2}, target_depth);
    auto window = smallest_verified_window(model, direction, target_depth, cap, bound);
    if (!window)
        throw Error("not-locally-injective",
                    "no rectangular window verifies local injectivity; Toeplitz-only regime");

    Vec2 wbb{0, 0};
    for (Vec2 c : *window) wbb = cmax(wbb, {c.x + 1, c.y + 1});

    auto basis = PatternBasis::make(model, depth, bound);
    std::map<std::string, std::vector<int>> classes;
    for (size_t i = 0; i < basis->size(); ++i) {
        std::string key = wbb.area() == 0
                              ? std::string()
                              : pattern_to_string(model, truncate_pattern(model, basis->patterns[i], wbb));
        classes[key].push_back(static_cast<int>(i));
    }

    std::vector<FrameElement> frame;
    for (const auto& [key, members] : classes) {
        std::optional<size_t> nu;
        for (int i : members) {
            Pattern image = shift_pattern(model, basis->patterns[static_cast<size_t>(i)], e);
            size_t fs = pattern_fiber(model, direction, image, bound).size();
            if (!nu)
                nu = fs;
            else if (*nu != fs)
                throw Error("nonconstant-fiber-count",
                            "fiber count varies on a frame support; no rational frame weight");
        }
        CVec v(basis->size());
        for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = CRat(0);
        for (int i : members) v(i) = CRat(1);
        frame.push_back({CylinderFunction::from_values(basis, std::move(v)),
                         Rational(static_cast<unsigned long>(*nu))});
    }
    return frame;
}

CylinderFunction frame_apply(const FiberMeasureSystem& mu, int direction,
                             const std::vector<FrameElement>& frame, const CylinderFunction& f) {
    std::optional<CylinderFunction> acc;
    for (const auto& u : frame) {
        CylinderFunction term =
            mul(u.indicator, apply_expectation(mul(conj(u.indicator), f), mu, direction));
        term = scale(CRat(u.weight_squared), term);
        acc = acc ? add(*acc, term) : term;
    }
    if (!acc) throw Error("bad-frame", "empty frame");
    return *acc;
}

bool frame_reconstructs(const FiberMeasureSystem& mu, int direction,
                        const std::vector<FrameElement>& frame, const CylinderFunction& f) {
    return frame_apply(mu, direction, frame, f) == f;
}

CylinderFunction tensor_inner(const FiberMeasureSystem& mu, const SimpleTensor& s,
                              const SimpleTensor& t) {
    if (s.first_direction != t.first_direction)
        throw Error("shape-mismatch", "tensors from different leg orders");
    int d1 = s.first_direction;
    int d2 = d1 == 1 ? 2 : 1;
    if (s.legA.backend() == CylinderFunction::Backend::Laurent) {
        CylinderFunction a = inner_product(s.legA, t.legA, mu, unit_vec(d1));
        return apply_transfer_pow(mul(conj(s.legB), mul(a, t.legB)), mu, unit_vec(d2));
    }
    Vec2 da = cmax(s.legA.depth(), t.legA.depth());
    CylinderFunction a = inner_product(embed_to_depth(s.legA, da), embed_to_depth(t.legA, da), mu,
                                       unit_vec(d1));
    Vec2 db = cmax(cmax(s.legB.depth(), t.legB.depth()), a.depth());
    CylinderFunction prod = mul(conj(embed_to_depth(s.legB, db)),
                                mul(embed_to_depth(a, db), embed_to_depth(t.legB, db)));
    return apply_transfer_pow(prod, mu, unit_vec(d2));
}

CylinderFunction phi_iso(const SimpleTensor& t) {
    CylinderFunction ab = apply_alpha(t.legB, t.first_direction);
    if (t.legA.backend() == CylinderFunction::Backend::Laurent) return mul(t.legA, ab);
    Vec2 d = cmax(t.legA.depth(), ab.depth());
    return mul(embed_to_depth(t.legA, d), embed_to_depth(ab, d));
}

SimpleTensor phi_iso_inv(const CylinderFunction& xi, int first_direction) {
    CylinderFunction one = xi.backend() == CylinderFunction::Backend::Laurent
                               ? CylinderFunction::laurent_one(xi.model())
                               : CylinderFunction::one(xi.basis());
    return {first_direction, xi, one};
}

CylinderFunction e11_inner(const FiberMeasureSystem& mu, const CylinderFunction& xi,
                           const CylinderFunction& eta) {
    return inner_product(xi, eta, mu, {1, 1});
}

CommutingExpectationsReport check_commuting_expectations(const ModelHandle& model,
                                                         const FiberMeasureSystem& mu, Vec2 depth,
                                                         std::uint64_t bound) {
    CommutingExpectationsReport rep;
    rep.depth = depth;
    OperatorMatrix p1 = expectation_matrix(model, mu, 1, depth, bound);
    OperatorMatrix p2 = expectation_matrix(model, mu, 2, depth, bound);
    CMat a = CMat(p1.entries * p2.entries);
    CMat b = CMat(p2.entries * p1.entries);
    Rational worst(0);
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            CRat d = a(i, j) - b(i, j);
            if (d.is_zero()) continue;
            rep.commute = false;
            Rational mag = abs(d.re) + abs(d.im);
            if (mag > worst) {
                worst = mag;
                rep.deviation = d;
                if (p1.domain.laurent) {
                    rep.witness = "entry (z^" + std::to_string(p1.domain.lo + i) + ", z^" +
                                  std::to_string(p1.domain.lo + j) + ")";
                } else {
                    const auto& pats = p1.domain.pattern_basis->patterns;
                    rep.witness = "entry (" + pattern_to_string(model, pats[static_cast<size_t>(i)]) +
                                  ", " + pattern_to_string(model, pats[static_cast<size_t>(j)]) + ")";
                }
            }
        }
    return rep;
}

namespace {

std::vector<CylinderFunction> spanning_functions(const ModelHandle& model, Vec2 depth,
                                                 std::uint64_t bound) {
    std::vector<CylinderFunction> span;
    if (model.kind() == ModelKind::Circle) {
        long k = std::min<long>(std::max(depth.x, depth.y), 2);
        for (long e = -k; e <= k; ++e) span.push_back(CylinderFunction::monomial(model, e));
    } else {
        auto basis = PatternBasis::make(model, depth, bound);
        for (const auto& p : basis->patterns)
            span.push_back(CylinderFunction::indicator(basis, p));
    }
    return span;
}

} // namespace

PhiLemmaReport phi_lemma_check(const ModelHandle& model, const FiberMeasureSystem& mu, Vec2 depth,
                               std::uint64_t bound) {
    PhiLemmaReport rep;
    auto span = spanning_functions(model, depth, bound);

    std::vector<SimpleTensor> tensors;
    for (const auto& a : span)
        for (const auto& b : span) tensors.push_back({1, a, b});

    for (size_t s = 0; s < tensors.size(); ++s)
        for (size_t t = 0; t < tensors.size(); ++t) {
            CylinderFunction lhs =
                inner_product(phi_iso(tensors[s]), phi_iso(tensors[t]), mu, {1, 1});
            CylinderFunction rhs = tensor_inner(mu, tensors[s], tensors[t]);
            ++rep.pairs_checked;
            if (!equal_as_functions(lhs, rhs)) {
                rep.inner_products_match = false;
                rep.witness = "tensor pair #" + std::to_string(s) + ", #" + std::to_string(t);
                return rep;
            }
        }

    // Right inverse: Phi(xi (x) 1) recovers xi for xi in the E_(1,1) span.
    for (const auto& xi : span) {
        CylinderFunction back = phi_iso(phi_iso_inv(xi, 1));
        if (!equal_as_functions(back, xi)) {
            rep.inverse_right = false;
            rep.witness = "right inverse fails";
            return rep;
        }
    }

    // Left inverse, tested weakly through inner products against the span.
    for (const auto& s : tensors) {
        SimpleTensor back = phi_iso_inv(phi_iso(s), 1);
        for (const auto& t : tensors) {
            if (!equal_as_functions(tensor_inner(mu, back, t), tensor_inner(mu, s, t))) {
                rep.inverse_left = false;
                rep.witness = "left inverse fails in inner products";
                return rep;
            }
        }
    }
    return rep;
}

FlipReport flip_unitary_check(const ModelHandle& model, const FiberMeasureSystem& mu, Vec2 depth,
                              std::uint64_t bound) {
    CommutingExpectationsReport ce = check_commuting_expectations(model, mu, depth, bound);
    if (!ce.commute)
        throw Error("noncommuting-expectations",
                    "flip isomorphism needs commuting expectations; witness " + ce.witness);

    FlipReport rep;
    std::vector<CylinderFunction> span = spanning_functions(model, depth, bound);

    auto flip = [&](const SimpleTensor& t) {
        // Phi21^{-1} o Phi12: realize in E_(1,1), then view as zeta (x) 1.
        return phi_iso_inv(phi_iso(t), 2);
    };

    std::vector<SimpleTensor> tensors;
    for (const auto& a : span)
        for (const auto& b : span) tensors.push_back({1, a, b});

    for (size_t s = 0; s < tensors.size(); ++s)
        for (size_t t = 0; t < tensors.size(); ++t) {
            CylinderFunction lhs = tensor_inner(mu, tensors[s], tensors[t]);
            CylinderFunction rhs = tensor_inner(mu, flip(tensors[s]), flip(tensors[t]));
            ++rep.pairs_checked;
            if (!equal_as_functions(lhs, rhs)) {
                rep.inner_products_preserved = false;
                rep.witness = "simple tensor pair #" + std::to_string(s) + ", #" + std::to_string(t);
                return rep;
            }
        }
    return rep;
}

KernelFunction theta_kernel(const FiberMeasureSystem& mu, const CylinderFunction& xi,
                            const CylinderFunction& eta, Vec2 n) {
    if (xi.backend() != CylinderFunction::Backend::PatternValues)
        throw Error("bad-backend", "pattern-kernel construction needs pattern functions");
    if (xi.basis()->depth != eta.basis()->depth) throw Error("depth-mismatch", "theta legs disagree");
    KernelFunction k = kernel_zero(xi.basis()->model, mu, n, xi.basis()->depth);
    for (size_t c = 0; c < k.partition.classes.size(); ++c) {
        const auto& cls = k.partition.classes[c];
        for (size_t i = 0; i < cls.size(); ++i)
            for (size_t j = 0; j < cls.size(); ++j)
                k.blocks[c](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    xi.values()(cls[i]) * conj(eta.values()(cls[j]));
    }
    return k;
}

KernelFunction theta_compose_rule(const FiberMeasureSystem& mu, const CylinderFunction& xi,
                                  const CylinderFunction& eta, const CylinderFunction& xi2,
                                  const CylinderFunction& eta2, Vec2 n) {
    CylinderFunction a = inner_product(eta, xi2, mu, n);
    CylinderFunction left = right_action(xi, a, n);
    return theta_kernel(mu, left, eta2, n);
}

LaurentKernel laurent_theta(const CylinderFunction& xi, const CylinderFunction& eta, Vec2 n) {
    if (xi.backend() != CylinderFunction::Backend::Laurent)
        throw Error("bad-backend", "laurent_theta needs Laurent functions");
    LaurentKernel k;
    k.model = xi.model();
    k.n = n;
    const auto& c = k.model.circle();
    Integer period = 1;
    for (int i = 0; i < n.x; ++i) period *= c.p1;
    for (int j = 0; j < n.y; ++j) period *= c.p2;
    k.period = period;
    for (const auto& [a, ca] : xi.coeffs())
        for (const auto& [b, cb] : eta.coeffs()) {
            CRat v = ca * conj(cb);
            if (!v.is_zero()) k.coeffs[{a, b}] += v;
        }
    return k;
}

namespace {

bool divisible(long v, const Integer& period) {
    Integer r = Integer(v) % period;
    return r == 0;
}

} // namespace

LaurentKernel laurent_convolve(const LaurentKernel& k1, const LaurentKernel& k2) {
    if (k1.n != k2.n) throw Error("shape-mismatch", "kernels on different R_n");
    LaurentKernel out;
    out.model = k1.model;
    out.n = k1.n;
    out.period = k1.period;
    for (const auto& [ab, c1] : k1.coeffs)
        for (const auto& [ab2, c2] : k2.coeffs) {
            auto [a, b] = ab;
            auto [a2, b2] = ab2;
            // Averaging z^{a2-b} over the sigma^n fiber keeps it iff P | a2-b.
            if (!divisible(a2 - b, out.period)) continue;
            CRat v = c1 * c2;
            if (v.is_zero()) continue;
            out.coeffs[{a + a2 - b, b2}] += v;
        }
    return out;
}

LaurentKernel laurent_canonical(const LaurentKernel& k) {
    LaurentKernel out;
    out.model = k.model;
    out.n = k.n;
    out.period = k.period;
    long p = static_cast<long>(out.period.get_si());
    long ap = p < 0 ? -p : p;
    for (const auto& [ab, c] : k.coeffs) {
        if (c.is_zero()) continue;
        auto [a, b] = ab;
        // (a,b) ~ (a+P, b+P): x^P equals y^P on R_n pairs, so reduce b into
        // [0,|P|) and shift a by the same amount.
        long bb = ((b % ap) + ap) % ap;
        long aa = a + (bb - b);
        out.coeffs[{aa, bb}] += c;
    }
    for (auto it = out.coeffs.begin(); it != out.coeffs.end();)
        it = it->second.is_zero() ? out.coeffs.erase(it) : std::next(it);
    return out;
}

CylinderFunction laurent_kernel_apply(const LaurentKernel& k, const CylinderFunction& f) {
    CylinderFunction out = CylinderFunction::laurent_zero(k.model);
    for (const auto& [ab, c] : k.coeffs) {
        auto [a, b] = ab;
        for (const auto& [e, fe] : f.coeffs()) {
            if (!divisible(e - b, k.period)) continue;
            out.set_coeff(a + e - b, out.coeff_at(a + e - b) + c * fe);
        }
    }
    return out;
}

bool exactly_equal(const LaurentKernel& a, const LaurentKernel& b) {
    if (a.n != b.n || a.period != b.period) return false;
    LaurentKernel ca = laurent_canonical(a);
    LaurentKernel cb = laurent_canonical(b);
    return ca.coeffs == cb.coeffs;
}

GrowthReport compactness_growth_diagnostic(const ModelHandle& model, const FiberMeasureSystem& mu,
                                           int direction, int max_depth_index,
                                           std::uint64_t bound) {
    GrowthReport rep;
    rep.direction = direction;
    Vec2 n = unit_vec(direction);
    for (int d = 1; d <= max_depth_index; ++d) {
        Vec2 depth = direction == 1 ? Vec2{2, d} : Vec2{d, 2};
        GrowthEntry entry;
        entry.depth_index = d;
        entry.depth = depth;

        KernelFunction id = kernel_identity(model, mu, n, depth, bound);
        Integer max_class = 0;
        for (const auto& cls : id.partition.classes)
            max_class = std::max(max_class, Integer(cls.size()));
        entry.theta_count = max_class;

        // Constructive witness: label class members injectively; the label
        // indicators give exactly max_class theta kernels summing to phi(1).
        for (size_t c = 0; c < id.blocks.size(); ++c)
            for (const Rational& w : id.weights[c])
                if (w != id.weights[c][0])
                    throw Error("weights-not-class-constant",
                                "growth diagnostic needs class-constant weights");
        KernelFunction acc = kernel_zero(model, mu, n, depth, bound);
        long labels = static_cast<long>(max_class.get_si());
        for (long l = 0; l < labels; ++l) {
            KernelFunction kl = kernel_zero(model, mu, n, depth, bound);
            for (size_t c = 0; c < kl.partition.classes.size(); ++c) {
                size_t sz = kl.partition.classes[c].size();
                if (static_cast<size_t>(l) >= sz) continue;
                kl.blocks[c](static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(l)) =
                    CRat(Rational(1 / kl.weights[c][static_cast<size_t>(l)]));
            }
            acc = kernel_add(acc, kl);
        }
        entry.reconstruction_exact = exactly_equal(acc, id);
        rep.entries.push_back(std::move(entry));
    }

    rep.strictly_increasing = rep.entries.size() > 1;
    rep.constant = rep.entries.size() > 0;
    for (size_t i = 1; i < rep.entries.size(); ++i) {
        if (!(rep.entries[i].theta_count > rep.entries[i - 1].theta_count))
            rep.strictly_increasing = false;
        if (rep.entries[i].theta_count != rep.entries[0].theta_count) rep.constant = false;
    }
    return rep;
}

} // namespace r2d
