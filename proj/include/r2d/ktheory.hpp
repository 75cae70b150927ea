#pragma once

#include "r2d/bimodule.hpp"

#include <map>
#include <optional>
#include <string>

namespace r2d {

/// One level of a Bratteli diagram. Vertices are block isomorphism types;
/// `sizes` are the matrix block sizes and `counts` the number of R_n-classes
/// aggregated into each vertex (1 for rank-2-graph vertex levels).
struct BratteliLevel {
    Vec2 n;
    std::vector<Integer> sizes;
    std::vector<Integer> counts;
    std::string base;  // "finite" | "circle" | "nondiscrete" | "vertices"
    std::vector<std::string> labels;
};

/// Levels plus integer multiplicity matrices between consecutive levels;
/// edges[t] has one row per level-t vertex and one column per level-(t+1)
/// vertex, and sizes_{t+1} = edges[t]^T * sizes_t (unital inclusions).
struct BratteliDiagram {
    std::vector<BratteliLevel> levels;
    std::vector<IntMat> edges;
};

/// Throws Error("inconsistent-diagram") when unitality fails at some level.
void validate_diagram(const BratteliDiagram& d);

/// Diagram of the chain C*(R_{n(0)}) -> C*(R_{n(1)}) -> ... at fixed depth.
BratteliDiagram bratteli_build(const ModelHandle& model, const std::vector<Vec2>& chain,
                               Vec2 depth, std::uint64_t bound = kDefaultCandidateBound);

/// Diagram of the rank-2-graph AF core along the chain: levels are vertex
/// copies with sizes M1^a M2^b * 1, steps n -> n + (a,b) carry edge matrices
/// (M1^T)^a (M2^T)^b.
BratteliDiagram bratteli_from_kgraph(const Rank2Graph& g, const std::vector<Vec2>& chain);

/// Merge adjacent steps (multiply the edge matrices); the dimension-group
/// data is invariant under this.
BratteliDiagram telescope(const BratteliDiagram& d);

/// prime -> exponent; kInfiniteExponent marks p^infinity.
constexpr int kInfiniteExponent = -1;
using Supernatural = std::map<Integer, int>;

std::string supernatural_to_string(const Supernatural& s);

struct DimensionGroupReport {
    bool stationary = false;
    std::optional<IntMat> stationary_matrix;
    std::optional<Supernatural> supernatural;        // single-vertex levels only
    std::optional<std::vector<Integer>> char_poly;   // characteristic polynomial, highest degree first
    bool primitive = false;
    int primitive_power = -1;                        // smallest power with all entries positive
    std::string primitivity_note;
    std::string k0_note;                             // e.g. "Z[1/6]", "Z^3"
};

DimensionGroupReport dimension_group_report(const BratteliDiagram& d);

struct MinimalityEvidence {
    std::string seed;
    bool full = false;
    bool stabilized_below_full = false;
    Integer reached = 0;
    Integer total = 0;
};

struct SimplicityBudget {
    Vec2 depth{2, 2};
    Vec2 kmax{2, 2};
    Vec2 pqmax{1, 1};
    std::uint64_t bound = kDefaultCandidateBound;
};

struct SimplicityReport {
    enum class Verdict { EvidenceForSimple, Inconclusive, ObstructionFound };
    Verdict verdict = Verdict::Inconclusive;
    std::vector<MinimalityEvidence> minimality;
    std::vector<PeriodicityReport> freeness;
    std::string note;
};

/// Aggregates orbit-reach (minimality) and periodicity (essential freeness)
/// diagnostics across the budget. Depth-stamped evidence only, never a
/// theorem: full reach for every seed plus breaking extensions for every
/// tested (p,q) yields evidence-for-simple; a reach that stabilizes strictly
/// below the full pattern set, or an identically periodic pair, is an
/// obstruction.
SimplicityReport simplicity_report(const ModelHandle& model, const SimplicityBudget& budget);

struct CoreCheckReport {
    long n1 = 0, n2 = 0;
    int levels = 0;
    std::vector<Integer> sizes;       // dim E_(m,m), m = 1..levels, by enumeration
    bool sizes_match_power = true;    // equals (n1*n2)^m
    bool flip_preserves_inner = true; // e_i (x) f_j -> f_j (x) e_i on the basis
};

/// Trivial-flip product system over scalars with E_i = C^{n_i}: the
/// fixed-point-algebra levels are full matrix algebras of size (n1*n2)^m.
CoreCheckReport cuntz_tensor_core_check(long n1, long n2, int levels);

/// Graphviz DOT rendering, one rank per level, edge labels = multiplicities.
std::string diagram_to_dot(const BratteliDiagram& d);

} // namespace r2d
