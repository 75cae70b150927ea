#pragma once

#include "r2d/model.hpp"

#include <functional>
#include <map>
#include <memory>

namespace r2d {

/// Ordered basis of admissible depth patterns (arcs for circle models).
struct PatternBasis {
    ModelHandle model;
    Vec2 depth;
    std::vector<Pattern> patterns;  // sorted by pattern_less

    int index_of(const Pattern& p) const;
    size_t size() const { return patterns.size(); }

    static std::shared_ptr<const PatternBasis> make(const ModelHandle& model, Vec2 depth,
                                                    std::uint64_t bound = kDefaultCandidateBound);
};
using PatternBasisPtr = std::shared_ptr<const PatternBasis>;

/// Exact scalar function at finite depth. Symbolic and rank-2-graph models
/// use values on a pattern basis; circle models use finite Laurent
/// polynomials in z (sparse exponent -> coefficient map).
class CylinderFunction {
public:
    enum class Backend { PatternValues, Laurent };

    static CylinderFunction zero(PatternBasisPtr basis);
    static CylinderFunction one(PatternBasisPtr basis);
    static CylinderFunction indicator(PatternBasisPtr basis, const Pattern& p);
    static CylinderFunction from_values(PatternBasisPtr basis, CVec values);

    static CylinderFunction laurent_zero(ModelHandle model);
    static CylinderFunction laurent_one(ModelHandle model);
    static CylinderFunction monomial(ModelHandle model, long exp, CRat coeff = CRat(1));

    Backend backend() const { return backend_; }
    const ModelHandle& model() const;
    Vec2 depth() const;

    const PatternBasisPtr& basis() const { return basis_; }
    const CVec& values() const { return values_; }
    const std::map<long, CRat>& coeffs() const { return coeffs_; }

    CRat value_at(const Pattern& p) const;
    CRat coeff_at(long exp) const;
    void set_coeff(long exp, CRat c);

    bool is_zero() const;

    friend bool operator==(const CylinderFunction& a, const CylinderFunction& b);

private:
    Backend backend_ = Backend::PatternValues;
    PatternBasisPtr basis_;
    CVec values_;
    ModelHandle model_;
    std::map<long, CRat> coeffs_;
};

CylinderFunction conj(const CylinderFunction& f);
CylinderFunction add(const CylinderFunction& f, const CylinderFunction& g);
CylinderFunction sub(const CylinderFunction& f, const CylinderFunction& g);
CylinderFunction mul(const CylinderFunction& f, const CylinderFunction& g);
CylinderFunction scale(const CRat& c, const CylinderFunction& f);

/// alpha_i(f) = f . sigma_i; raises pattern depth by one in the direction.
CylinderFunction apply_alpha(const CylinderFunction& f, int direction);

/// (P_i f)(x) = sum over the sigma_i-fiber of x of weight(y) f(y); same depth.
CylinderFunction apply_expectation(const CylinderFunction& f, const FiberMeasureSystem& mu,
                                   int direction);

/// (L_i f)(x) = sum over sigma_i(y) = x of weight(y) f(y); depth drops by one.
CylinderFunction apply_transfer(const CylinderFunction& f, const FiberMeasureSystem& mu,
                                int direction);

/// L^n = L_2^{n.y} after L_1^{n.x}.
CylinderFunction apply_transfer_pow(const CylinderFunction& f, const FiberMeasureSystem& mu, Vec2 n);
CylinderFunction apply_alpha_pow(const CylinderFunction& f, Vec2 n);

/// Canonical refinement: value of the truncated pattern. Pattern backend only.
CylinderFunction embed_to_depth(const CylinderFunction& f, Vec2 depth);

/// Equality as elements of C(X): both functions embedded into the common
/// refinement depth and compared exactly.
bool equal_as_functions(const CylinderFunction& f, const CylinderFunction& g);

/// <xi,eta>_n = L^n(conj(xi) * eta). Both functions at a common depth.
CylinderFunction inner_product(const CylinderFunction& xi, const CylinderFunction& eta,
                               const FiberMeasureSystem& mu, Vec2 n);

/// Right module action xi . a = xi * alpha^n(a).
CylinderFunction right_action(const CylinderFunction& xi, const CylinderFunction& a, Vec2 n);

// ---- operator matrices ----------------------------------------------------

/// Basis descriptor: a pattern basis or a contiguous Laurent exponent range.
struct BasisRef {
    bool laurent = false;
    PatternBasisPtr pattern_basis;
    long lo = 0, hi = -1;  // inclusive exponent range

    Eigen::Index dim() const {
        return laurent ? static_cast<Eigen::Index>(hi - lo + 1)
                       : static_cast<Eigen::Index>(pattern_basis->size());
    }
    static BasisRef patterns(PatternBasisPtr b) { return {false, std::move(b), 0, -1}; }
    static BasisRef laurent_span(long lo, long hi) { return {true, nullptr, lo, hi}; }
};

struct OperatorMatrix {
    enum class Tag { Expectation, Transfer, Endomorphism, LeftAction, ThetaKernel };
    Tag tag = Tag::Endomorphism;
    BasisRef domain;
    BasisRef codomain;
    CMat entries;  // codomain.dim() x domain.dim()
};

std::string to_string(OperatorMatrix::Tag tag);

/// Apply a function-level operator to every basis vector of `domain` and
/// collect the columns. The outputs must be expressible in `codomain`.
OperatorMatrix materialize(const std::function<CylinderFunction(const CylinderFunction&)>& op,
                           const ModelHandle& model, const BasisRef& domain,
                           const BasisRef& codomain, OperatorMatrix::Tag tag);

CylinderFunction basis_vector(const ModelHandle& model, const BasisRef& basis, Eigen::Index i);

/// Coordinates of f in `basis`; throws if f has support outside it.
CVec coordinates(const CylinderFunction& f, const BasisRef& basis);

bool exactly_equal(const OperatorMatrix& a, const OperatorMatrix& b);

} // namespace r2d
