#pragma once

#include "r2d/cylinder.hpp"

#include <map>
#include <optional>

namespace r2d {

/// Finite-depth groupoid element (x, p-q, y): patterns x, y at a common
/// depth with sigma^p x = sigma^q y on a recorded overlap rectangle. The
/// overlap shrinks under composition (finite data cannot recover it), which
/// keeps every stored identity exactly verified.
struct GroupoidElementApprox {
    Vec2 p, q;
    Pattern x, y;
    Vec2 degree;   // p - q, in Z^2
    Vec2 overlap;  // region where sigma^p x = sigma^q y holds
};

GroupoidElementApprox make_element(const ModelHandle& model, Vec2 p, Vec2 q, const Pattern& x,
                                   const Pattern& y);
GroupoidElementApprox unit_element(const ModelHandle& model, const Pattern& x);
GroupoidElementApprox compose_elements(const ModelHandle& model, const GroupoidElementApprox& g,
                                       const GroupoidElementApprox& h);
GroupoidElementApprox invert_element(const GroupoidElementApprox& g);

/// Partition of the admissible depth patterns by their sigma^n restriction.
/// Classes are ordered by least member, members sorted.
struct RnPartition {
    Vec2 n;
    Vec2 depth;
    PatternBasisPtr basis;
    std::vector<std::vector<int>> classes;
    std::vector<int> class_of;  // basis index -> class index
};

RnPartition rn_classes(const ModelHandle& model, Vec2 n, Vec2 depth,
                       std::uint64_t bound = kDefaultCandidateBound);

struct RnAlgebraDescription {
    enum class Base { Finite, Circle, NonDiscrete };
    Base base = Base::Finite;
    Vec2 n;
    Vec2 depth;
    std::vector<Integer> block_sizes;        // finite / nondiscrete: class cardinalities
    Integer circle_matrix_size = 0;          // circle: k(n) = |p1|^{n1} |p2|^{n2}
    std::vector<Rational> class_measures;    // nondiscrete: product-measure weight per class
};

/// Finite models: multimatrix algebra (+) M_{classSize}. Circle models:
/// (circle base, matrix size k(n)). Full-shift models: the classes are
/// cylinder families standing for non-discrete (Cantor) classes, reported
/// with product-measure weights instead of point counts.
RnAlgebraDescription rn_algebra_description(const ModelHandle& model, Vec2 n, Vec2 depth,
                                            std::uint64_t bound = kDefaultCandidateBound);

/// Multiplicity matrix of C*(R_n) -> C*(R_m) at depth, aggregated over block
/// isomorphism types (distinct block sizes): entry (B,A) counts the
/// R_n-classes of size type A inside an R_m-class of size type B. Requires
/// the count to be uniform over all classes of each type, which holds for
/// the homogeneous bundled models; otherwise throws
/// Error("inclusion-not-type-uniform").
struct InclusionMultiplicity {
    std::vector<Integer> from_sizes;  // block size per type at n (ascending)
    std::vector<Integer> to_sizes;    // block size per type at m (ascending)
    IntMat mult;                      // to_types x from_types
};

InclusionMultiplicity rn_inclusion_multiplicity(const ModelHandle& model, Vec2 n, Vec2 m,
                                                Vec2 depth,
                                                std::uint64_t bound = kDefaultCandidateBound);

/// mu^n weight of a depth pattern inside its sigma^n-fiber: the product of
/// one-step fiber weights along L_2^{n_y} after L_1^{n_x}.
Rational fiber_weight_pow(const ModelHandle& model, const FiberMeasureSystem& mu,
                          const Pattern& z, Vec2 n);

/// Exact kernel on the depth-level R_n pairs, stored blockwise per class.
struct KernelFunction {
    ModelHandle model;
    FiberMeasureSystem mu;
    Vec2 n;
    RnPartition partition;
    std::vector<CMat> blocks;                    // per class: k(x,y) over members
    std::vector<std::vector<Rational>> weights;  // per class: mu^n weight per member

    Vec2 depth() const { return partition.depth; }
};

KernelFunction kernel_zero(const ModelHandle& model, const FiberMeasureSystem& mu, Vec2 n,
                           Vec2 depth, std::uint64_t bound = kDefaultCandidateBound);
KernelFunction kernel_identity(const ModelHandle& model, const FiberMeasureSystem& mu, Vec2 n,
                               Vec2 depth, std::uint64_t bound = kDefaultCandidateBound);

/// (k1 * k2)(x,y) = sum over sigma^n(z) = sigma^n(x) of w(z) k1(x,z) k2(z,y).
/// The fiber weight makes convolution agree exactly with the composition of
/// the associated operators.
KernelFunction kernel_convolve(const KernelFunction& k1, const KernelFunction& k2);

KernelFunction kernel_add(const KernelFunction& k1, const KernelFunction& k2);

/// Block-matrix representation B(k) = w_C * K_C per class C; convolution of
/// kernels corresponds to blockwise multiplication (no square roots needed:
/// the weight is constant on each class, which is checked). This is the
/// oracle used against kernel_convolve.
OperatorMatrix kernel_to_block_matrix(const KernelFunction& k);
KernelFunction block_matrix_to_kernel(const OperatorMatrix& m, const KernelFunction& shape_like);

/// Operator on depth functions: (k f)(x) = sum_z w(z) k(x,z) f(z).
OperatorMatrix kernel_operator(const KernelFunction& k);
CylinderFunction kernel_apply(const KernelFunction& k, const CylinderFunction& f);

bool exactly_equal(const KernelFunction& a, const KernelFunction& b);

} // namespace r2d
