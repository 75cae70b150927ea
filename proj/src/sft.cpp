#include "r2d/sft.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace r2d {

Vec2 SftSpec::window_bbox() const {
    Vec2 hi{0, 0};
    for (Vec2 c : window) hi = cmax(hi, c);
    return {hi.x + 1, hi.y + 1};
}

int SftSpec::symbol_index(const std::string& s) const {
    for (size_t i = 0; i < alphabet.size(); ++i)
        if (alphabet[i] == s) return static_cast<int>(i);
    return -1;
}

void SftSpec::normalize() {
    if (window.empty()) return;
    Vec2 lo = window[0];
    for (Vec2 c : window) lo = cmin(lo, c);
    std::vector<size_t> order(window.size());
    std::iota(order.begin(), order.end(), size_t(0));
    std::vector<Vec2> shifted(window.size());
    for (size_t i = 0; i < window.size(); ++i) shifted[i] = window[i] - lo;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return shifted[a] < shifted[b]; });

    std::vector<Vec2> new_window;
    new_window.reserve(window.size());
    for (size_t i : order) new_window.push_back(shifted[i]);

    std::vector<std::vector<std::uint8_t>> new_allowed;
    new_allowed.reserve(allowed.size());
    for (const auto& a : allowed) {
        std::vector<std::uint8_t> re(a.size());
        for (size_t i = 0; i < order.size(); ++i) re[i] = a[order[i]];
        new_allowed.push_back(std::move(re));
    }
    std::sort(new_allowed.begin(), new_allowed.end());
    new_allowed.erase(std::unique(new_allowed.begin(), new_allowed.end()), new_allowed.end());
    window = std::move(new_window);
    allowed = std::move(new_allowed);
}

namespace {

struct AllowedSet {
    std::set<std::vector<std::uint8_t>> set;
    explicit AllowedSet(const SftSpec& s) : set(s.allowed.begin(), s.allowed.end()) {}
    bool contains(const std::vector<std::uint8_t>& a) const { return set.count(a) > 0; }
};

void validate_structure(const SftSpec& spec, ValidationReport& rep) {
    if (spec.alphabet.empty()) rep.fail("empty-alphabet", "alphabet must be nonempty");
    std::set<std::string> names(spec.alphabet.begin(), spec.alphabet.end());
    if (names.size() != spec.alphabet.size())
        rep.fail("duplicate-symbol", "alphabet symbols must be distinct");
    if (spec.window.empty()) rep.fail("empty-window", "window must be nonempty");
    if (spec.allowed.empty()) rep.fail("empty-allowed", "allowed pattern set must be nonempty");
    for (const auto& a : spec.allowed) {
        if (a.size() != spec.window.size()) {
            rep.fail("allowed-arity-mismatch", "allowed assignment has wrong cell count");
            continue;
        }
        for (std::uint8_t s : a)
            if (s >= spec.alphabet.size())
                rep.fail("symbol-out-of-alphabet",
                         "allowed assignment uses symbol index " + std::to_string(int(s)));
    }
}

} // namespace

bool pattern_admissible(const SftSpec& spec, const RectPattern& p) {
    Vec2 bb = spec.window_bbox();
    AllowedSet allowed(spec);
    std::vector<std::uint8_t> buf(spec.window.size());
    for (int b = 0; b + bb.y <= p.shape.y; ++b)
        for (int a = 0; a + bb.x <= p.shape.x; ++a) {
            for (size_t c = 0; c < spec.window.size(); ++c)
                buf[c] = p.at(a + spec.window[c].x, b + spec.window[c].y);
            if (!allowed.contains(buf)) return false;
        }
    return true;
}

void enumerate_constrained(const SftSpec& spec, Vec2 shape, const std::vector<int>& fixed,
                           std::uint64_t candidate_bound,
                           const std::function<bool(const RectPattern&)>& emit) {
    if (!shape.nonneg()) throw Error("bad-shape", "shape components must be nonnegative");
    const long long ncells = shape.area();
    if (fixed.size() != static_cast<size_t>(ncells))
        throw Error("bad-shape", "fixed-cell mask does not match shape");

    RectPattern p;
    p.shape = shape;
    p.cells.assign(static_cast<size_t>(ncells), 0);
    if (ncells == 0) {
        emit(p);
        return;
    }

    const Vec2 bb = spec.window_bbox();
    const int nsym = static_cast<int>(spec.alphabet.size());
    AllowedSet allowed(spec);

    // Translates of the window grouped by the cell (row-major maximum of the
    // translate) at which they become fully determined during the scan.
    const Vec2 wmax = spec.window.back();  // window is sorted row-major
    std::vector<std::vector<Vec2>> checks(static_cast<size_t>(ncells));
    bool any_check = false;
    for (int b = 0; b + bb.y <= shape.y; ++b)
        for (int a = 0; a + bb.x <= shape.x; ++a) {
            size_t last = static_cast<size_t>(b + wmax.y) * shape.x + (a + wmax.x);
            checks[last].push_back({a, b});
            any_check = true;
        }

    if (!any_check) {
        // No translate fits: the candidate space is |V|^(m*n) with no pruning.
        double total = std::pow(static_cast<double>(nsym), static_cast<double>(ncells));
        double free_total = total;
        for (long long c = 0; c < ncells; ++c)
            if (fixed[static_cast<size_t>(c)] >= 0) free_total /= nsym;
        if (free_total > static_cast<double>(candidate_bound))
            throw Error("shape-overflow",
                        "unconstrained candidate space exceeds bound " + std::to_string(candidate_bound));
    }

    std::vector<std::uint8_t> buf(spec.window.size());
    std::uint64_t emitted = 0;
    bool stop = false;

    auto check_at = [&](size_t cell) {
        for (Vec2 t : checks[cell]) {
            for (size_t c = 0; c < spec.window.size(); ++c)
                buf[c] = p.at(t.x + spec.window[c].x, t.y + spec.window[c].y);
            if (!allowed.contains(buf)) return false;
        }
        return true;
    };

    std::function<void(size_t)> rec = [&](size_t cell) {
        if (stop) return;
        if (cell == static_cast<size_t>(ncells)) {
            if (++emitted > candidate_bound)
                throw Error("shape-overflow",
                            "enumeration exceeds candidate bound " + std::to_string(candidate_bound));
            if (!emit(p)) stop = true;
            return;
        }
        int f = fixed[cell];
        int lo = f >= 0 ? f : 0;
        int hi = f >= 0 ? f + 1 : nsym;
        for (int s = lo; s < hi && !stop; ++s) {
            p.cells[cell] = static_cast<std::uint8_t>(s);
            if (check_at(cell)) rec(cell + 1);
        }
    };
    rec(0);
}

std::vector<RectPattern> enumerate_patterns(const SftSpec& spec, Vec2 shape,
                                            std::uint64_t candidate_bound) {
    std::vector<RectPattern> out;
    std::vector<int> fixed(static_cast<size_t>(shape.area()), -1);
    enumerate_constrained(spec, shape, fixed, candidate_bound, [&](const RectPattern& p) {
        out.push_back(p);
        return true;
    });
    return out;
}

Integer count_patterns_transfer(const SftSpec& spec, Vec2 shape, std::uint64_t row_bound) {
    if (!shape.nonneg()) throw Error("bad-shape", "shape components must be nonnegative");
    if (shape.area() == 0) return 1;
    const Vec2 bb = spec.window_bbox();
    const int m = shape.x, n = shape.y;
    const int nsym = static_cast<int>(spec.alphabet.size());

    // Height-h blocks of rows drive the vertical extension; a block is valid
    // when every horizontal translate of the window inside it is allowed.
    const int h = bb.y;
    if (n < h || m < bb.x) {
        // No translate fits: |V|^(m*n).
        Integer total = 1;
        for (long long c = 0; c < shape.area(); ++c) total *= nsym;
        return total;
    }

    double rowspace = std::pow(static_cast<double>(nsym), static_cast<double>(m));
    if (rowspace > static_cast<double>(row_bound))
        throw Error("shape-overflow", "row candidate space exceeds bound");

    // Enumerate all rows as integers in [0, nsym^m).
    std::uint64_t nrows = 1;
    for (int i = 0; i < m; ++i) nrows *= static_cast<std::uint64_t>(nsym);
    auto row_symbol = [&](std::uint64_t row, int i) {
        for (int k = 0; k < i; ++k) row /= nsym;
        return static_cast<std::uint8_t>(row % nsym);
    };

    AllowedSet allowed(spec);
    std::vector<std::uint8_t> buf(spec.window.size());
    auto block_valid = [&](const std::vector<std::uint64_t>& rows) {
        for (int a = 0; a + bb.x <= m; ++a) {
            for (size_t c = 0; c < spec.window.size(); ++c)
                buf[c] = row_symbol(rows[static_cast<size_t>(spec.window[c].y)],
                                    a + spec.window[c].x);
            if (!allowed.contains(buf)) return false;
        }
        return true;
    };

    // States are (h-1)-row stacks; memoized transitions by appending one row.
    std::map<std::vector<std::uint64_t>, Integer> cur;
    if (h == 1) {
        cur[{}] = 1;
    } else {
        std::vector<std::uint64_t> stack(static_cast<size_t>(h - 1));
        std::function<void(int)> fill = [&](int level) {
            if (level == h - 1) {
                cur[stack] += 1;
                return;
            }
            for (std::uint64_t r = 0; r < nrows; ++r) {
                stack[static_cast<size_t>(level)] = r;
                fill(level + 1);
            }
        };
        fill(0);
    }

    int rows_done = h - 1;
    std::map<std::pair<std::vector<std::uint64_t>, std::uint64_t>, bool> compat;
    while (rows_done < n) {
        std::map<std::vector<std::uint64_t>, Integer> next;
        for (const auto& [stack, cnt] : cur) {
            for (std::uint64_t r = 0; r < nrows; ++r) {
                auto key = std::make_pair(stack, r);
                auto it = compat.find(key);
                bool ok;
                if (it != compat.end()) {
                    ok = it->second;
                } else {
                    std::vector<std::uint64_t> block(stack);
                    block.push_back(r);
                    ok = block_valid(block);
                    compat.emplace(key, ok);
                }
                if (!ok) continue;
                std::vector<std::uint64_t> ns(stack.begin() + (h > 1 ? 1 : 0), stack.end());
                if (h > 1) ns.push_back(r);
                next[ns] += cnt;
            }
        }
        cur = std::move(next);
        ++rows_done;
    }
    Integer total = 0;
    for (const auto& [stack, cnt] : cur) total += cnt;
    return total;
}

ValidationReport validate_sft(const SftSpec& spec, Vec2 depth, std::uint64_t candidate_bound) {
    ValidationReport rep;
    validate_structure(spec, rep);
    if (!rep.ok) return rep;

    Vec2 bb = spec.window_bbox();
    if (!leq(bb, depth))
        throw Error("depth-too-small", "depth must cover the window bounding box " + to_string(bb));

    rep.pattern_count_at_depth = count_patterns_transfer(spec, depth, candidate_bound);
    rep.nonempty_at_depth = rep.pattern_count_at_depth > 0;
    if (!rep.nonempty_at_depth) {
        rep.fail("empty-language-at-depth", "no admissible pattern of shape " + to_string(depth));
        return rep;
    }

    // One-step extendability in each direction, witnessed per pattern.
    auto pats = enumerate_patterns(spec, depth, candidate_bound);
    rep.extendable = true;
    for (const auto& p : pats) {
        for (int dir = 1; dir <= 2; ++dir) {
            Vec2 big = depth + unit_vec(dir);
            std::vector<int> fixed(static_cast<size_t>(big.area()), -1);
            for (int j = 0; j < depth.y; ++j)
                for (int i = 0; i < depth.x; ++i)
                    fixed[static_cast<size_t>(j) * big.x + i] = p.at(i, j);
            bool found = false;
            enumerate_constrained(spec, big, fixed, candidate_bound, [&](const RectPattern&) {
                found = true;
                return false;
            });
            if (!found) {
                rep.extendable = false;
                rep.non_extendable.push_back(p);
                break;
            }
        }
    }
    return rep;
}

SftSpec transpose(const SftSpec& spec) {
    SftSpec t = spec;
    for (Vec2& c : t.window) c = {c.y, c.x};
    t.normalize();
    return t;
}

RectPattern transpose(const RectPattern& p) {
    RectPattern t;
    t.shape = {p.shape.y, p.shape.x};
    t.cells.resize(p.cells.size());
    for (int j = 0; j < p.shape.y; ++j)
        for (int i = 0; i < p.shape.x; ++i)
            t.at(j, i) = p.at(i, j);
    return t;
}

std::string pattern_to_string(const SftSpec& spec, const RectPattern& p) {
    std::string s;
    for (int j = 0; j < p.shape.y; ++j) {
        if (j) s += "/";
        for (int i = 0; i < p.shape.x; ++i) {
            if (i) s += ",";
            s += spec.alphabet[p.at(i, j)];
        }
    }
    return s;
}

SftSpec ledrappier_spec() {
    SftSpec s;
    s.alphabet = {"0", "1"};
    s.window = {{0, 0}, {1, 0}, {0, 1}};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                if ((a + b + c) % 2 == 0)
                    s.allowed.push_back({static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b),
                                         static_cast<std::uint8_t>(c)});
    s.normalize();
    return s;
}

SftSpec full_shift_spec(const std::vector<std::string>& alphabet) {
    SftSpec s;
    s.alphabet = alphabet;
    s.window = {{0, 0}};
    for (size_t i = 0; i < alphabet.size(); ++i)
        s.allowed.push_back({static_cast<std::uint8_t>(i)});
    s.normalize();
    return s;
}

} // namespace r2d
