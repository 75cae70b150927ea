#pragma once

#include "r2d/circle.hpp"
#include "r2d/common.hpp"
#include "r2d/kgraph.hpp"
#include "r2d/rational.hpp"
#include "r2d/sft.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace r2d {

enum class ModelKind { Sft, KGraph, Circle, FullShift };

std::string to_string(ModelKind k);

/// Finite-depth point of a model: a symbol rectangle (SFT / full shift),
/// a completed grid (rank-2 graph), a subdivision arc or an exact rational
/// angle (circle).
using Pattern = std::variant<RectPattern, GridPattern, ArcPattern, Angle>;

bool pattern_less(const Pattern& a, const Pattern& b);
bool pattern_eq(const Pattern& a, const Pattern& b);

/// Unified handle over the four model kinds. Immutable after construction;
/// cheap to copy.
class ModelHandle {
public:
    ModelKind kind() const { return kind_; }
    const SftSpec& sft() const { return *sft_; }
    const Rank2Graph& graph() const { return *graph_; }
    const CircleSpec& circle() const { return *circle_; }

    bool is_symbolic() const { return kind_ == ModelKind::Sft || kind_ == ModelKind::FullShift; }

    static ModelHandle make_sft(SftSpec spec);
    static ModelHandle make_full_shift(std::vector<std::string> alphabet);
    static ModelHandle make_kgraph(Rank2Graph g);
    static ModelHandle make_circle(long p1, long p2);

private:
    ModelKind kind_ = ModelKind::Sft;
    std::shared_ptr<const SftSpec> sft_;
    std::shared_ptr<const Rank2Graph> graph_;
    std::shared_ptr<const CircleSpec> circle_;
};

/// Validates the payload and wraps it. Validation failures are thrown as
/// Error with the validator's first issue code.
ModelHandle build_model(const SftSpec& spec);
ModelHandle build_model(const Rank2Graph& g);
ModelHandle build_model_circle(long p1, long p2);
ModelHandle build_model_full_shift(const std::vector<std::string>& alphabet);

/// Fiberwise measure choice per direction. counting-normalized gives every
/// preimage weight 1/nu; product-weights multiplies per-symbol weights over
/// the new cells and normalizes over the fiber, so each fiber sums to 1
/// exactly in both modes.
struct DirectionMeasure {
    enum class Mode { CountingNormalized, ProductWeights };
    Mode mode = Mode::CountingNormalized;
    std::vector<Rational> symbol_weights;  // indexed by symbol, ProductWeights only
};

struct FiberMeasureSystem {
    DirectionMeasure dir1;
    DirectionMeasure dir2;

    const DirectionMeasure& direction(int d) const { return d == 1 ? dir1 : dir2; }

    static FiberMeasureSystem counting();
    /// Uniform product weights 1/|V| per symbol in both directions.
    static FiberMeasureSystem uniform_product(size_t alphabet_size);
    static FiberMeasureSystem product(std::vector<Rational> w1, std::vector<Rational> w2);
};

/// Validates positivity and sum-1 of product weights against the model.
void validate_measure(const ModelHandle& model, const FiberMeasureSystem& mu);

/// Default measure for a model: Bernoulli(1/|V|,...) product weights for the
/// full shift, counting-normalized otherwise.
FiberMeasureSystem default_measure(const ModelHandle& model);

// ---- pattern-space interface -------------------------------------------

/// All admissible patterns of the given shape, sorted. For circle models the
/// shape is the arc subdivision level.
std::vector<Pattern> admissible_patterns(const ModelHandle& model, Vec2 shape,
                                         std::uint64_t bound = kDefaultCandidateBound);

Vec2 pattern_shape(const ModelHandle& model, const Pattern& p);

/// sigma^k at pattern level: drops the first k.x columns and k.y rows.
Pattern shift_pattern(const ModelHandle& model, const Pattern& p, Vec2 k);

/// Restriction to the [0,shape) corner.
Pattern truncate_pattern(const ModelHandle& model, const Pattern& p, Vec2 shape);

/// Preimages of `target` under sigma_direction, one shape step larger,
/// sorted. Empty result signals pattern-level non-surjectivity at `target`.
std::vector<Pattern> pattern_fiber(const ModelHandle& model, int direction, const Pattern& target,
                                   std::uint64_t bound = kDefaultCandidateBound);

/// Fiber together with its measure weights; weights are positive and sum to
/// 1 exactly (full pi-system at pattern level). Empty fibers return empty.
std::vector<std::pair<Pattern, Rational>> weighted_fiber(const ModelHandle& model,
                                                         const FiberMeasureSystem& mu,
                                                         int direction, const Pattern& target,
                                                         std::uint64_t bound = kDefaultCandidateBound);

ModelHandle transpose(const ModelHandle& model);
Pattern transpose_pattern(const Pattern& p);

std::string pattern_to_string(const ModelHandle& model, const Pattern& p);

} // namespace r2d
