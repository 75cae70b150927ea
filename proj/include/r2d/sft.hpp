#pragma once

#include "r2d/common.hpp"
#include "r2d/rational.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

namespace r2d {

/// Finite rectangular block of symbols, row-major: cell (i,j) sits at index
/// j*shape.x + i. Shapes with a zero component denote the unique empty
/// pattern of that shape.
struct RectPattern {
    Vec2 shape;
    std::vector<std::uint8_t> cells;

    std::uint8_t at(int i, int j) const { return cells[static_cast<size_t>(j) * shape.x + i]; }
    std::uint8_t& at(int i, int j) { return cells[static_cast<size_t>(j) * shape.x + i]; }

    friend bool operator==(const RectPattern& a, const RectPattern& b) {
        return a.shape == b.shape && a.cells == b.cells;
    }
    friend bool operator<(const RectPattern& a, const RectPattern& b) {
        if (a.shape != b.shape) return a.shape < b.shape;
        return a.cells < b.cells;  // row-major lexicographic
    }
};

/// Two-dimensional subshift of finite type: alphabet V, finite window F
/// (anchored at the origin of its bounding box) and the admissible
/// assignments on F. A single-cell window with all symbols allowed is the
/// full shift.
struct SftSpec {
    std::vector<std::string> alphabet;
    std::vector<Vec2> window;                          // sorted row-major, min corner (0,0)
    std::vector<std::vector<std::uint8_t>> allowed;    // aligned with `window`, sorted

    Vec2 window_bbox() const;
    int symbol_index(const std::string& s) const;      // -1 if absent

    /// Shift window to the origin, sort cells row-major, reorder the allowed
    /// assignments accordingly, sort and dedupe them.
    void normalize();
};

struct ValidationIssue {
    std::string code;
    std::string detail;
};

struct ValidationReport {
    bool ok = true;
    std::vector<ValidationIssue> issues;
    // validate_sft extras
    bool nonempty_at_depth = false;
    Integer pattern_count_at_depth = 0;
    bool extendable = false;
    std::vector<RectPattern> non_extendable;

    void fail(const std::string& code, const std::string& detail) {
        ok = false;
        issues.push_back({code, detail});
    }
};

/// Structural validation of the spec plus depth-bounded language checks:
/// is the language nonempty at `depth`, and does every admissible pattern of
/// shape `depth` extend one step to the right and one step up?
ValidationReport validate_sft(const SftSpec& spec, Vec2 depth,
                              std::uint64_t candidate_bound = kDefaultCandidateBound);

/// True when every translate of the window lying inside the pattern is an
/// allowed assignment (free boundary conditions).
bool pattern_admissible(const SftSpec& spec, const RectPattern& p);

/// All admissible patterns of the given shape in row-major lexicographic
/// order. Throws Error("shape-overflow") when the search would exceed
/// `candidate_bound` emitted patterns (or the unconstrained candidate space
/// exceeds it with no pruning available).
std::vector<RectPattern> enumerate_patterns(const SftSpec& spec, Vec2 shape,
                                            std::uint64_t candidate_bound = kDefaultCandidateBound);

/// Enumerate admissible patterns that agree with `fixed` wherever it is
/// nonnegative (fixed has shape.area() entries, -1 = free cell). `emit`
/// returns false to stop the search early.
void enumerate_constrained(const SftSpec& spec, Vec2 shape, const std::vector<int>& fixed,
                           std::uint64_t candidate_bound,
                           const std::function<bool(const RectPattern&)>& emit);

/// Number of admissible patterns of the given shape, computed by row-by-row
/// transfer-matrix extension with a memoized row-compatibility relation.
/// Independent of enumerate_patterns; the two are cross-checked in tests.
Integer count_patterns_transfer(const SftSpec& spec, Vec2 shape,
                                std::uint64_t row_bound = kDefaultCandidateBound);

/// Transposed spec: window cells and allowed assignments flipped across the
/// diagonal. Direction-2 algorithms run as direction-1 on the transpose.
SftSpec transpose(const SftSpec& spec);
RectPattern transpose(const RectPattern& p);

std::string pattern_to_string(const SftSpec& spec, const RectPattern& p);

/// The three-cell parity subshift on {0,1}: x(i+1,j) + x(i,j) + x(i,j+1) = 0
/// mod 2. Ships as a fixture and anchors most exact expectations in tests.
SftSpec ledrappier_spec();

/// Full shift on the given alphabet as a single-cell-window SFT.
SftSpec full_shift_spec(const std::vector<std::string>& alphabet);

} // namespace r2d
