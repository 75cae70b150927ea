#pragma once

#include "r2d/model.hpp"

#include <optional>
#include <set>
#include <vector>

namespace r2d {

/// sigma^k restriction x(.+k); requires the pattern to keep a nonempty shape.
Pattern apply_shift(const ModelHandle& model, const Pattern& p, Vec2 k);

/// Weighted preimage list of `target` under sigma_direction (see
/// weighted_fiber). Exposed under the spec's operation name.
std::vector<std::pair<Pattern, Rational>> fiber_decomposition(
    const ModelHandle& model, const FiberMeasureSystem& mu, int direction, const Pattern& target,
    std::uint64_t bound = kDefaultCandidateBound);

struct LocalInjectivityVerdict {
    enum class Status { VerifiedAtDepth, RefutedWithWitness, Inconclusive };
    Status status = Status::Inconclusive;
    int direction = 1;
    std::vector<Vec2> window;
    Vec2 depth;
    /// Distinct admissible patterns agreeing on the window with equal
    /// sigma_direction images; present iff refuted.
    std::optional<std::pair<Pattern, Pattern>> witness;
    std::string note;
};

/// Depth-stamped local-injectivity check for sigma_direction on the cylinder
/// determined by `window`.
///
/// Verified means two exact facts at this depth: no two admissible patterns
/// of shape depth+e agree on the window, have equal shifts and differ; and
/// the agreement propagates one further step (patterns one row/column taller
/// agreeing on the guaranteed prefix agree on the new cell). Refuted carries
/// a revalidating witness pair, possibly one step beyond the depth box.
/// Inconclusive is reserved for searches that exceed the candidate bound or
/// empty pattern sets.
LocalInjectivityVerdict check_local_injectivity(const ModelHandle& model, int direction,
                                                const std::vector<Vec2>& window, Vec2 depth,
                                                std::uint64_t bound = kDefaultCandidateBound);

struct OpenSurjectiveReport {
    bool surjective_at_depth = true;
    std::vector<Pattern> empty_fiber_witnesses;
    bool open_at_depth = true;
    std::string open_note;
};

/// Pattern-level surjectivity (every depth pattern has a preimage) and
/// one-step openness (shifted cylinder images are unions of cylinders at the
/// next extension step).
OpenSurjectiveReport check_open_surjective(const ModelHandle& model, int direction, Vec2 depth,
                                           std::uint64_t bound = kDefaultCandidateBound);

struct OrbitReachReport {
    std::vector<Pattern> reached;   // depth patterns, sorted
    bool full = false;              // reached == all admissible depth patterns
    Integer admissible_count = 0;
};

/// Depth patterns realized by U_{k <= kBound} sigma^{-k}(sigma^k [seed]),
/// computed by pattern-level forward shift then constrained fiber search.
/// `full` is the minimality diagnostic.
OrbitReachReport orbit_reach(const ModelHandle& model, const Pattern& seed, Vec2 kBound,
                             Vec2 depth, std::uint64_t bound = kDefaultCandidateBound);

struct PeriodicityReport {
    Vec2 p, q;
    Vec2 depth;
    /// Depth patterns consistent with sigma^p x = sigma^q x on the overlap.
    std::vector<Pattern> consistent;
    Integer consistent_count = 0;      // for circle models: number of exact solutions
    bool all_points_periodic = false;  // sigma^p == sigma^q identically at pattern level
    /// True when every consistent pattern admits an extension breaking the
    /// periodicity at the next depth (aperiodic points are depth-dense).
    bool evidence_positive = false;
    std::vector<Pattern> stuck;        // consistent patterns with no breaking extension
};

PeriodicityReport periodicity_diagnostic(const ModelHandle& model, Vec2 p, Vec2 q, Vec2 depth,
                                         std::uint64_t bound = kDefaultCandidateBound);

/// Scan rectangular windows [0,a)x[0,b) in increasing area and report the
/// smallest one verified for sigma_direction, if any within the cap.
std::optional<std::vector<Vec2>> smallest_verified_window(const ModelHandle& model, int direction,
                                                          Vec2 depth, Vec2 window_cap = {3, 3},
                                                          std::uint64_t bound = kDefaultCandidateBound);

} // namespace r2d
