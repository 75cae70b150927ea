#include "r2d/cylinder.hpp"

#include <algorithm>

namespace r2d {

int PatternBasis::index_of(const Pattern& p) const {
    auto it = std::lower_bound(patterns.begin(), patterns.end(), p, pattern_less);
    if (it == patterns.end() || !pattern_eq(*it, p)) return -1;
    return static_cast<int>(it - patterns.begin());
}

std::shared_ptr<const PatternBasis> PatternBasis::make(const ModelHandle& model, Vec2 depth,
                                                       std::uint64_t bound) {
    auto b = std::make_shared<PatternBasis>();
    b->model = model;
    b->depth = depth;
    b->patterns = admissible_patterns(model, depth, bound);
    return b;
}

CylinderFunction CylinderFunction::zero(PatternBasisPtr basis) {
    CylinderFunction f;
    f.backend_ = Backend::PatternValues;
    f.values_ = CVec(basis->size());
    for (Eigen::Index i = 0; i < f.values_.size(); ++i) f.values_(i) = CRat(0);
    f.basis_ = std::move(basis);
    return f;
}

CylinderFunction CylinderFunction::one(PatternBasisPtr basis) {
    CylinderFunction f = zero(std::move(basis));
    for (Eigen::Index i = 0; i < f.values_.size(); ++i) f.values_(i) = CRat(1);
    return f;
}

CylinderFunction CylinderFunction::indicator(PatternBasisPtr basis, const Pattern& p) {
    CylinderFunction f = zero(basis);
    int idx = basis->index_of(p);
    if (idx < 0) throw Error("bad-pattern", "indicator pattern not in the basis");
    f.values_(idx) = CRat(1);
    return f;
}

CylinderFunction CylinderFunction::from_values(PatternBasisPtr basis, CVec values) {
    if (static_cast<size_t>(values.size()) != basis->size())
        throw Error("bad-basis", "value vector does not match basis size");
    CylinderFunction f;
    f.backend_ = Backend::PatternValues;
    f.basis_ = std::move(basis);
    f.values_ = std::move(values);
    return f;
}

CylinderFunction CylinderFunction::laurent_zero(ModelHandle model) {
    if (model.kind() != ModelKind::Circle)
        throw Error("bad-model", "Laurent functions are for circle models");
    CylinderFunction f;
    f.backend_ = Backend::Laurent;
    f.model_ = std::move(model);
    return f;
}

CylinderFunction CylinderFunction::laurent_one(ModelHandle model) {
    return monomial(std::move(model), 0);
}

CylinderFunction CylinderFunction::monomial(ModelHandle model, long exp, CRat coeff) {
    CylinderFunction f = laurent_zero(std::move(model));
    if (!coeff.is_zero()) f.coeffs_[exp] = std::move(coeff);
    return f;
}

const ModelHandle& CylinderFunction::model() const {
    return backend_ == Backend::Laurent ? model_ : basis_->model;
}

Vec2 CylinderFunction::depth() const {
    if (backend_ != Backend::PatternValues)
        throw Error("bad-backend", "Laurent functions carry no depth");
    return basis_->depth;
}

CRat CylinderFunction::value_at(const Pattern& p) const {
    int idx = basis_->index_of(p);
    if (idx < 0) throw Error("bad-pattern", "pattern not in the basis");
    return values_(idx);
}

CRat CylinderFunction::coeff_at(long exp) const {
    auto it = coeffs_.find(exp);
    return it == coeffs_.end() ? CRat(0) : it->second;
}

void CylinderFunction::set_coeff(long exp, CRat c) {
    if (c.is_zero())
        coeffs_.erase(exp);
    else
        coeffs_[exp] = std::move(c);
}

bool CylinderFunction::is_zero() const {
    if (backend_ == Backend::Laurent) {
        for (const auto& [e, c] : coeffs_)
            if (!c.is_zero()) return false;
        return true;
    }
    for (Eigen::Index i = 0; i < values_.size(); ++i)
        if (!values_(i).is_zero()) return false;
    return true;
}

bool operator==(const CylinderFunction& a, const CylinderFunction& b) {
    if (a.backend_ != b.backend_) return false;
    if (a.backend_ == CylinderFunction::Backend::Laurent) {
        auto trim = [](const std::map<long, CRat>& m) {
            std::map<long, CRat> out;
            for (const auto& [e, c] : m)
                if (!c.is_zero()) out.emplace(e, c);
            return out;
        };
        return trim(a.coeffs_) == trim(b.coeffs_);
    }
    if (a.basis_->depth != b.basis_->depth || a.basis_->size() != b.basis_->size()) return false;
    for (Eigen::Index i = 0; i < a.values_.size(); ++i)
        if (a.values_(i) != b.values_(i)) return false;
    return true;
}

namespace {

void require_same_backend(const CylinderFunction& f, const CylinderFunction& g) {
    if (f.backend() != g.backend()) throw Error("depth-mismatch", "mixed function backends");
    if (f.backend() == CylinderFunction::Backend::PatternValues &&
        f.basis()->depth != g.basis()->depth)
        throw Error("depth-mismatch", "functions at depths " + to_string(f.basis()->depth) +
                                          " and " + to_string(g.basis()->depth));
}

} // namespace

CylinderFunction conj(const CylinderFunction& f) {
    if (f.backend() == CylinderFunction::Backend::Laurent) {
        CylinderFunction g = CylinderFunction::laurent_zero(f.model());
        for (const auto& [e, c] : f.coeffs()) g.set_coeff(-e, conj(c));
        return g;
    }
    CVec v = f.values();
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = conj(v(i));
    return CylinderFunction::from_values(f.basis(), std::move(v));
}

CylinderFunction add(const CylinderFunction& f, const CylinderFunction& g) {
    require_same_backend(f, g);
    if (f.backend() == CylinderFunction::Backend::Laurent) {
        CylinderFunction h = f;
        for (const auto& [e, c] : g.coeffs()) h.set_coeff(e, h.coeff_at(e) + c);
        return h;
    }
    return CylinderFunction::from_values(f.basis(), CVec(f.values() + g.values()));
}

CylinderFunction sub(const CylinderFunction& f, const CylinderFunction& g) {
    return add(f, scale(CRat(-1), g));
}

CylinderFunction mul(const CylinderFunction& f, const CylinderFunction& g) {
    require_same_backend(f, g);
    if (f.backend() == CylinderFunction::Backend::Laurent) {
        CylinderFunction h = CylinderFunction::laurent_zero(f.model());
        for (const auto& [e1, c1] : f.coeffs())
            for (const auto& [e2, c2] : g.coeffs()) h.set_coeff(e1 + e2, h.coeff_at(e1 + e2) + c1 * c2);
        return h;
    }
    CVec v(f.values().size());
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = f.values()(i) * g.values()(i);
    return CylinderFunction::from_values(f.basis(), std::move(v));
}

CylinderFunction scale(const CRat& c, const CylinderFunction& f) {
    if (f.backend() == CylinderFunction::Backend::Laurent) {
        CylinderFunction h = CylinderFunction::laurent_zero(f.model());
        for (const auto& [e, coeff] : f.coeffs()) h.set_coeff(e, c * coeff);
        return h;
    }
    CVec v = f.values();
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = c * v(i);
    return CylinderFunction::from_values(f.basis(), std::move(v));
}

CylinderFunction apply_alpha(const CylinderFunction& f, int direction) {
    if (f.backend() == CylinderFunction::Backend::Laurent) {
        long p = f.model().circle().degree(direction);
        CylinderFunction g = CylinderFunction::laurent_zero(f.model());
        for (const auto& [e, c] : f.coeffs()) g.set_coeff(e * p, c);
        return g;
    }
    const auto& basis = f.basis();
    Vec2 nd = basis->depth + unit_vec(direction);
    auto big = PatternBasis::make(basis->model, nd);
    CVec v(big->size());
    for (size_t i = 0; i < big->size(); ++i) {
        Pattern shifted = shift_pattern(basis->model, big->patterns[i], unit_vec(direction));
        v(static_cast<Eigen::Index>(i)) = f.value_at(shifted);
    }
    return CylinderFunction::from_values(big, std::move(v));
}

namespace {

// Shared fiber machinery for P and L on the pattern backend. Groups the
// depth basis by the shifted pattern and records each member's fiber weight.
struct FiberGroups {
    PatternBasisPtr small;                       // depth - e basis
    std::vector<int> group_of;                   // basis index -> small index
    std::vector<Rational> weight_of;             // basis index -> weight in its fiber
};

FiberGroups make_fiber_groups(const PatternBasisPtr& basis, const FiberMeasureSystem& mu,
                              int direction) {
    FiberGroups fg;
    const ModelHandle& model = basis->model;
    Vec2 e = unit_vec(direction);
    if (basis->depth.x - e.x < 0 || basis->depth.y - e.y < 0)
        throw Error("depth-too-small", "transfer/expectation needs depth >= 1 in the direction");
    auto small = PatternBasis::make(model, basis->depth - e);
    fg.group_of.assign(basis->size(), -1);
    fg.weight_of.assign(basis->size(), Rational(0));
    for (size_t t = 0; t < small->size(); ++t) {
        auto wf = weighted_fiber(model, mu, direction, small->patterns[t]);
        for (auto& [y, w] : wf) {
            int idx = basis->index_of(y);
            if (idx < 0) throw Error("bad-basis", "fiber element missing from basis");
            fg.group_of[static_cast<size_t>(idx)] = static_cast<int>(t);
            fg.weight_of[static_cast<size_t>(idx)] = w;
        }
    }
    for (size_t i = 0; i < basis->size(); ++i)
        if (fg.group_of[i] < 0) throw Error("bad-basis", "pattern missing from every fiber");
    fg.small = std::move(small);
    return fg;
}

} // namespace

CylinderFunction apply_expectation(const CylinderFunction& f, const FiberMeasureSystem& mu,
                                   int direction) {
    if (f.backend() == CylinderFunction::Backend::Laurent) {
        long p = f.model().circle().degree(direction);
        CylinderFunction g = CylinderFunction::laurent_zero(f.model());
        for (const auto& [e, c] : f.coeffs())
            if (e % p == 0) g.set_coeff(e, c);
        return g;
    }
    auto fg = make_fiber_groups(f.basis(), mu, direction);
    CVec acc(fg.small->size());
    for (Eigen::Index i = 0; i < acc.size(); ++i) acc(i) = CRat(0);
    for (size_t i = 0; i < f.basis()->size(); ++i)
        acc(fg.group_of[i]) += fg.weight_of[i] * f.values()(static_cast<Eigen::Index>(i));
    CVec v(f.basis()->size());
    for (size_t i = 0; i < f.basis()->size(); ++i) v(static_cast<Eigen::Index>(i)) = acc(fg.group_of[i]);
    return CylinderFunction::from_values(f.basis(), std::move(v));
}

CylinderFunction apply_transfer(const CylinderFunction& f, const FiberMeasureSystem& mu,
                                int direction) {
    if (f.backend() == CylinderFunction::Backend::Laurent) {
        long p = f.model().circle().degree(direction);
        CylinderFunction g = CylinderFunction::laurent_zero(f.model());
        for (const auto& [e, c] : f.coeffs())
            if (e % p == 0) g.set_coeff(e / p, c);
        return g;
    }
    auto fg = make_fiber_groups(f.basis(), mu, direction);
    CVec acc(fg.small->size());
    for (Eigen::Index i = 0; i < acc.size(); ++i) acc(i) = CRat(0);
    for (size_t i = 0; i < f.basis()->size(); ++i)
        acc(fg.group_of[i]) += fg.weight_of[i] * f.values()(static_cast<Eigen::Index>(i));
    return CylinderFunction::from_values(fg.small, std::move(acc));
}

CylinderFunction apply_transfer_pow(const CylinderFunction& f, const FiberMeasureSystem& mu,
                                    Vec2 n) {
    CylinderFunction g = f;
    for (int i = 0; i < n.x; ++i) g = apply_transfer(g, mu, 1);
    for (int j = 0; j < n.y; ++j) g = apply_transfer(g, mu, 2);
    return g;
}

CylinderFunction apply_alpha_pow(const CylinderFunction& f, Vec2 n) {
    CylinderFunction g = f;
    for (int j = 0; j < n.y; ++j) g = apply_alpha(g, 2);
    for (int i = 0; i < n.x; ++i) g = apply_alpha(g, 1);
    return g;
}

CylinderFunction embed_to_depth(const CylinderFunction& f, Vec2 depth) {
    if (f.backend() == CylinderFunction::Backend::Laurent) return f;
    if (f.basis()->depth == depth) return f;
    if (!leq(f.basis()->depth, depth))
        throw Error("depth-mismatch", "embedding target depth must refine the source depth");
    auto big = PatternBasis::make(f.basis()->model, depth);
    CVec v(big->size());
    for (size_t i = 0; i < big->size(); ++i)
        v(static_cast<Eigen::Index>(i)) =
            f.value_at(truncate_pattern(f.basis()->model, big->patterns[i], f.basis()->depth));
    return CylinderFunction::from_values(big, std::move(v));
}

bool equal_as_functions(const CylinderFunction& f, const CylinderFunction& g) {
    if (f.backend() != g.backend()) return false;
    if (f.backend() == CylinderFunction::Backend::Laurent) return f == g;
    Vec2 d = cmax(f.basis()->depth, g.basis()->depth);
    return embed_to_depth(f, d) == embed_to_depth(g, d);
}

CylinderFunction inner_product(const CylinderFunction& xi, const CylinderFunction& eta,
                               const FiberMeasureSystem& mu, Vec2 n) {
    require_same_backend(xi, eta);
    return apply_transfer_pow(mul(conj(xi), eta), mu, n);
}

CylinderFunction right_action(const CylinderFunction& xi, const CylinderFunction& a, Vec2 n) {
    return mul(xi, apply_alpha_pow(a, n));
}

std::string to_string(OperatorMatrix::Tag tag) {
    switch (tag) {
        case OperatorMatrix::Tag::Expectation: return "expectation";
        case OperatorMatrix::Tag::Transfer: return "transfer";
        case OperatorMatrix::Tag::Endomorphism: return "endomorphism";
        case OperatorMatrix::Tag::LeftAction: return "leftAction";
        case OperatorMatrix::Tag::ThetaKernel: return "thetaKernel";
    }
    return "?";
}

CylinderFunction basis_vector(const ModelHandle& model, const BasisRef& basis, Eigen::Index i) {
    if (basis.laurent) return CylinderFunction::monomial(model, basis.lo + i);
    return CylinderFunction::indicator(basis.pattern_basis, basis.pattern_basis->patterns[i]);
}

CVec coordinates(const CylinderFunction& f, const BasisRef& basis) {
    CVec v(basis.dim());
    if (basis.laurent) {
        for (const auto& [e, c] : f.coeffs()) {
            if (c.is_zero()) continue;
            if (e < basis.lo || e > basis.hi)
                throw Error("bad-basis", "Laurent support outside the basis span");
        }
        for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = f.coeff_at(basis.lo + i);
        return v;
    }
    if (f.basis()->depth != basis.pattern_basis->depth)
        throw Error("depth-mismatch", "coordinates requested in a basis at another depth");
    return f.values();
}

OperatorMatrix materialize(const std::function<CylinderFunction(const CylinderFunction&)>& op,
                           const ModelHandle& model, const BasisRef& domain,
                           const BasisRef& codomain, OperatorMatrix::Tag tag) {
    OperatorMatrix m;
    m.tag = tag;
    m.domain = domain;
    m.codomain = codomain;
    m.entries = CMat(codomain.dim(), domain.dim());
    for (Eigen::Index j = 0; j < domain.dim(); ++j) {
        CVec col = coordinates(op(basis_vector(model, domain, j)), codomain);
        for (Eigen::Index i = 0; i < col.size(); ++i) m.entries(i, j) = col(i);
    }
    return m;
}

bool exactly_equal(const OperatorMatrix& a, const OperatorMatrix& b) {
    return exactly_equal(a.entries, b.entries);
}

} // namespace r2d
