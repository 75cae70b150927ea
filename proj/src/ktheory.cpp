#include "r2d/ktheory.hpp"

#include <algorithm>
#include <sstream>

namespace r2d {

void validate_diagram(const BratteliDiagram& d) {
    if (d.levels.empty()) throw Error("inconsistent-diagram", "diagram has no levels");
    if (d.edges.size() + 1 != d.levels.size())
        throw Error("inconsistent-diagram", "edge count does not match level count");
    for (size_t t = 0; t < d.edges.size(); ++t) {
        const IntMat& e = d.edges[t];
        if (e.rows() != static_cast<Eigen::Index>(d.levels[t].sizes.size()) ||
            e.cols() != static_cast<Eigen::Index>(d.levels[t + 1].sizes.size()))
            throw Error("inconsistent-diagram", "edge matrix shape mismatch at step " +
                                                    std::to_string(t));
        for (Eigen::Index j = 0; j < e.cols(); ++j) {
            Integer acc = 0;
            for (Eigen::Index i = 0; i < e.rows(); ++i) {
                if (e(i, j) < 0)
                    throw Error("inconsistent-diagram", "negative multiplicity");
                acc += e(i, j) * d.levels[t].sizes[static_cast<size_t>(i)];
            }
            if (acc != d.levels[t + 1].sizes[static_cast<size_t>(j)])
                throw Error("inconsistent-diagram",
                            "unitality fails at step " + std::to_string(t) + ", vertex " +
                                std::to_string(j) + ": " + acc.get_str() + " != " +
                                d.levels[t + 1].sizes[static_cast<size_t>(j)].get_str());
        }
    }
}

namespace {

BratteliLevel level_from_description(const ModelHandle& model, Vec2 n, Vec2 depth,
                                     std::uint64_t bound) {
    BratteliLevel lv;
    lv.n = n;
    RnAlgebraDescription d = rn_algebra_description(model, n, depth, bound);
    if (d.base == RnAlgebraDescription::Base::Circle) {
        lv.base = "circle";
        lv.sizes = {d.circle_matrix_size};
        lv.counts = {arc_count(model.circle(), depth) / d.circle_matrix_size};
        lv.labels = {"C(T)xM_" + d.circle_matrix_size.get_str()};
        return lv;
    }
    lv.base = d.base == RnAlgebraDescription::Base::NonDiscrete ? "nondiscrete" : "finite";
    std::map<Integer, Integer> by_size;
    for (const Integer& s : d.block_sizes) by_size[s] += 1;
    for (const auto& [size, count] : by_size) {
        lv.sizes.push_back(size);
        lv.counts.push_back(count);
        lv.labels.push_back("M_" + size.get_str());
    }
    return lv;
}

} // namespace

BratteliDiagram bratteli_build(const ModelHandle& model, const std::vector<Vec2>& chain,
                               Vec2 depth, std::uint64_t bound) {
    if (chain.empty()) throw Error("bad-chain", "empty chain");
    for (size_t t = 0; t + 1 < chain.size(); ++t)
        if (!leq(chain[t], chain[t + 1]))
            throw Error("bad-chain", "chain must be increasing in the componentwise order");
    if (model.kind() != ModelKind::Circle && !leq(chain.back() + Vec2{1, 1}, depth))
        throw Error("depth-too-small", "depth must exceed the largest chain entry");

    BratteliDiagram d;
    for (Vec2 n : chain) d.levels.push_back(level_from_description(model, n, depth, bound));
    for (size_t t = 0; t + 1 < chain.size(); ++t) {
        InclusionMultiplicity inc =
            rn_inclusion_multiplicity(model, chain[t], chain[t + 1], depth, bound);
        d.edges.push_back(IntMat(inc.mult.transpose()));
    }
    validate_diagram(d);
    return d;
}

BratteliDiagram bratteli_from_kgraph(const Rank2Graph& g, const std::vector<Vec2>& chain) {
    if (chain.empty()) throw Error("bad-chain", "empty chain");
    for (size_t t = 0; t + 1 < chain.size(); ++t)
        if (!leq(chain[t], chain[t + 1]))
            throw Error("bad-chain", "chain must be increasing in the componentwise order");

    const size_t nv = g.vertices.size();
    IntMat m1 = g.vertex_matrix_h();
    IntMat m2 = g.vertex_matrix_v();
    auto pow_mat = [&](const IntMat& m, int e) {
        IntMat acc = IntMat::Identity(nv, nv);
        for (int i = 0; i < e; ++i) acc = IntMat(acc * m);
        return acc;
    };

    BratteliDiagram d;
    for (Vec2 n : chain) {
        BratteliLevel lv;
        lv.n = n;
        lv.base = "vertices";
        IntMat acc = IntMat(pow_mat(m1, n.x) * pow_mat(m2, n.y));
        for (size_t v = 0; v < nv; ++v) {
            Integer s = 0;
            for (size_t u = 0; u < nv; ++u) s += acc(static_cast<Eigen::Index>(v),
                                                     static_cast<Eigen::Index>(u));
            lv.sizes.push_back(s);
            lv.counts.push_back(1);
            lv.labels.push_back(g.vertices[v]);
        }
        d.levels.push_back(std::move(lv));
    }
    for (size_t t = 0; t + 1 < chain.size(); ++t) {
        Vec2 step = chain[t + 1] - chain[t];
        IntMat e = IntMat(pow_mat(IntMat(m1.transpose()), step.x) *
                          pow_mat(IntMat(m2.transpose()), step.y));
        d.edges.push_back(std::move(e));
    }
    validate_diagram(d);
    return d;
}

BratteliDiagram telescope(const BratteliDiagram& d) {
    validate_diagram(d);
    BratteliDiagram out;
    out.levels.push_back(d.levels[0]);
    size_t t = 0;
    while (t < d.edges.size()) {
        if (t + 1 < d.edges.size()) {
            out.edges.push_back(IntMat(d.edges[t] * d.edges[t + 1]));
            out.levels.push_back(d.levels[t + 2]);
            t += 2;
        } else {
            out.edges.push_back(d.edges[t]);
            out.levels.push_back(d.levels[t + 1]);
            t += 1;
        }
    }
    validate_diagram(out);
    return out;
}

std::string supernatural_to_string(const Supernatural& s) {
    if (s.empty()) return "1";
    std::string out;
    for (const auto& [p, e] : s) {
        if (!out.empty()) out += "*";
        out += p.get_str();
        out += "^";
        out += e == kInfiniteExponent ? "inf" : std::to_string(e);
    }
    return out;
}

namespace {

std::map<Integer, int> factorize(Integer v) {
    std::map<Integer, int> f;
    for (Integer p = 2; p * p <= v; ++p)
        while (v % p == 0) {
            f[p] += 1;
            v /= p;
        }
    if (v > 1) f[v] += 1;
    return f;
}

// Characteristic polynomial via Faddeev-LeVerrier over exact rationals;
// coefficients of an integer matrix are integers.
std::vector<Integer> char_poly_int(const IntMat& m) {
    const Eigen::Index n = m.rows();
    QMat a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = Rational(m(i, j));
    QMat acc = QMat::Identity(n, n);
    std::vector<Rational> coeffs{Rational(1)};  // x^n coefficient
    QMat cur = acc;
    for (Eigen::Index k = 1; k <= n; ++k) {
        cur = QMat(a * cur);
        Rational tr(0);
        for (Eigen::Index i = 0; i < n; ++i) tr += cur(i, i);
        Rational c = -tr / k;
        coeffs.push_back(c);
        for (Eigen::Index i = 0; i < n; ++i) cur(i, i) += c;
    }
    std::vector<Integer> out;
    for (const Rational& c : coeffs) {
        Rational cc = c;
        cc.canonicalize();
        if (cc.get_den() != 1) throw Error("internal", "non-integer characteristic coefficient");
        out.push_back(cc.get_num());
    }
    return out;
}

} // namespace

DimensionGroupReport dimension_group_report(const BratteliDiagram& d) {
    validate_diagram(d);
    DimensionGroupReport rep;

    bool same_shape = true;
    for (size_t t = 1; t < d.levels.size(); ++t)
        if (d.levels[t].sizes.size() != d.levels[0].sizes.size()) same_shape = false;
    if (same_shape && !d.edges.empty()) {
        rep.stationary = true;
        for (size_t t = 1; t < d.edges.size(); ++t)
            if (!exactly_equal(d.edges[t], d.edges[0])) rep.stationary = false;
        if (rep.stationary) rep.stationary_matrix = d.edges[0];
    }

    bool single_vertex = true;
    for (const auto& lv : d.levels)
        if (lv.sizes.size() != 1) single_vertex = false;

    if (single_vertex && d.levels.size() >= 2) {
        std::vector<Integer> ratios;
        bool divisible = true;
        for (size_t t = 0; t + 1 < d.levels.size(); ++t) {
            const Integer& a = d.levels[t].sizes[0];
            const Integer& b = d.levels[t + 1].sizes[0];
            if (a == 0 || b % a != 0) {
                divisible = false;
                break;
            }
            ratios.push_back(b / a);
        }
        bool stable = divisible && !ratios.empty() &&
                      (ratios.size() == 1 ||
                       std::equal(ratios.begin() + 1, ratios.end(), ratios.begin()) ||
                       ratios[ratios.size() - 1] == ratios[ratios.size() - 2]);
        if (stable) {
            Integer r = ratios.back();
            Supernatural sn;
            if (r > 1)
                for (const auto& [p, e] : factorize(r)) sn[p] = kInfiniteExponent;
            for (const auto& [p, e] : factorize(d.levels.back().sizes[0]))
                if (!sn.count(p)) sn[p] = e;
            rep.supernatural = sn;
            rep.k0_note = r == 1 ? "Z" : "Z[1/" + r.get_str() + "]";
        }
    }

    if (rep.stationary) {
        const IntMat& m = *rep.stationary_matrix;
        rep.char_poly = char_poly_int(m);
        bool identity = true;
        for (Eigen::Index i = 0; i < m.rows() && identity; ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j)
                if (m(i, j) != (i == j ? 1 : 0)) {
                    identity = false;
                    break;
                }
        if (identity) {
            rep.primitive = false;
            rep.primitivity_note = "identity inclusion";
            if (rep.k0_note.empty()) rep.k0_note = "Z^" + std::to_string(m.rows());
        } else {
            IntMat acc = IntMat::Identity(m.rows(), m.cols());
            for (int power = 1; power <= 32; ++power) {
                acc = IntMat(acc * m);
                bool positive = true;
                for (Eigen::Index i = 0; i < acc.rows() && positive; ++i)
                    for (Eigen::Index j = 0; j < acc.cols(); ++j)
                        if (acc(i, j) <= 0) {
                            positive = false;
                            break;
                        }
                if (positive) {
                    rep.primitive = true;
                    rep.primitive_power = power;
                    break;
                }
            }
            if (!rep.primitive) rep.primitivity_note = "no positive power up to exponent 32";
        }
    }
    return rep;
}

SimplicityReport simplicity_report(const ModelHandle& model, const SimplicityBudget& budget) {
    SimplicityReport rep;

    // Minimality: orbit reach per seed, with a stabilization probe one step
    // below the budget to separate genuine obstructions from short budgets.
    std::vector<Pattern> seeds;
    if (model.kind() == ModelKind::Circle) {
        seeds = {Pattern(Angle(Rational(0))), Pattern(Angle(Rational(1, 2))),
                 Pattern(Angle(Rational(1, 3))), Pattern(Angle(Rational(2, 7)))};
    } else {
        Vec2 seed_shape = budget.depth + budget.kmax;
        seeds = admissible_patterns(model, seed_shape, budget.bound);
    }

    bool all_full = true, any_obstruction = false;
    for (const auto& seed : seeds) {
        OrbitReachReport full_run = orbit_reach(model, seed, budget.kmax, budget.depth, budget.bound);
        MinimalityEvidence ev;
        ev.seed = pattern_to_string(model, seed);
        ev.full = full_run.full;
        ev.reached = Integer(full_run.reached.size());
        ev.total = full_run.admissible_count;
        if (!full_run.full) {
            all_full = false;
            if (budget.kmax.x >= 1 && budget.kmax.y >= 1) {
                OrbitReachReport smaller = orbit_reach(model, seed, budget.kmax - Vec2{1, 1},
                                                       budget.depth, budget.bound);
                ev.stabilized_below_full = smaller.reached.size() == full_run.reached.size();
            }
            if (ev.stabilized_below_full) any_obstruction = true;
        }
        rep.minimality.push_back(std::move(ev));
    }

    // Essential freeness: periodicity diagnostics over distinct (p,q) pairs.
    bool all_free = true;
    std::vector<Vec2> exps;
    for (int x = 0; x <= budget.pqmax.x; ++x)
        for (int y = 0; y <= budget.pqmax.y; ++y) exps.push_back({x, y});
    for (size_t i = 0; i < exps.size(); ++i)
        for (size_t j = i + 1; j < exps.size(); ++j) {
            PeriodicityReport pr =
                periodicity_diagnostic(model, exps[j], exps[i], budget.depth, budget.bound);
            if (!pr.evidence_positive) all_free = false;
            if (pr.all_points_periodic) any_obstruction = true;
            rep.freeness.push_back(std::move(pr));
        }

    if (any_obstruction) {
        rep.verdict = SimplicityReport::Verdict::ObstructionFound;
        rep.note = "orbit reach stabilized below the full pattern set or a pair of shifts agrees "
                   "identically";
    } else if (all_full && all_free) {
        rep.verdict = SimplicityReport::Verdict::EvidenceForSimple;
        rep.note = "all orbits reach every depth pattern and every tested periodicity breaks";
    } else {
        rep.verdict = SimplicityReport::Verdict::Inconclusive;
        rep.note = "evidence incomplete at this budget";
    }
    return rep;
}

CoreCheckReport cuntz_tensor_core_check(long n1, long n2, int levels) {
    if (n1 < 1 || n2 < 1) throw Error("bad-degree", "dimensions must be >= 1");
    CoreCheckReport rep;
    rep.n1 = n1;
    rep.n2 = n2;
    rep.levels = levels;

    for (int m = 1; m <= levels; ++m) {
        // dim E_(m,m): count the words e_{i_1}..e_{i_m} f_{j_1}..f_{j_m} by
        // explicit odometer enumeration.
        std::vector<long> digits(static_cast<size_t>(2 * m), 0);
        Integer count = 0;
        bool done = false;
        while (!done) {
            count += 1;
            size_t pos = 0;
            while (pos < digits.size()) {
                long limit = pos < static_cast<size_t>(m) ? n1 : n2;
                if (++digits[pos] < limit) break;
                digits[pos] = 0;
                ++pos;
            }
            done = pos == digits.size();
        }
        rep.sizes.push_back(count);
        Integer expected = 1;
        for (int i = 0; i < m; ++i) expected *= Integer(n1) * Integer(n2);
        if (count != expected) rep.sizes_match_power = false;
    }

    // Flip e_i (x) f_j -> f_j (x) e_i on Kronecker representatives: the two
    // dot products must agree entrywise.
    auto kron_unit = [](long rows, long cols, long r, long c) {
        CVec v(rows * cols);
        for (Eigen::Index t = 0; t < v.size(); ++t) v(t) = CRat(0);
        v(r * cols + c) = CRat(1);
        return v;
    };
    auto dot = [](const CVec& a, const CVec& b) {
        CRat acc(0);
        for (Eigen::Index t = 0; t < a.size(); ++t) acc += conj(a(t)) * b(t);
        return acc;
    };
    for (long i = 0; i < n1 && rep.flip_preserves_inner; ++i)
        for (long j = 0; j < n2 && rep.flip_preserves_inner; ++j)
            for (long k = 0; k < n1 && rep.flip_preserves_inner; ++k)
                for (long l = 0; l < n2; ++l) {
                    CRat lhs = dot(kron_unit(n1, n2, i, j), kron_unit(n1, n2, k, l));
                    CRat rhs = dot(kron_unit(n2, n1, j, i), kron_unit(n2, n1, l, k));
                    if (lhs != rhs) {
                        rep.flip_preserves_inner = false;
                        break;
                    }
                }
    return rep;
}

std::string diagram_to_dot(const BratteliDiagram& d) {
    std::ostringstream os;
    os << "digraph bratteli {\n  rankdir=TB;\n  node [shape=box];\n";
    for (size_t t = 0; t < d.levels.size(); ++t) {
        os << "  { rank=same;";
        for (size_t v = 0; v < d.levels[t].sizes.size(); ++v) {
            os << " L" << t << "_" << v << " [label=\"" << d.levels[t].labels[v] << " size "
               << d.levels[t].sizes[v].get_str();
            if (d.levels[t].counts[v] != 1) os << " x" << d.levels[t].counts[v].get_str();
            os << "\"];";
        }
        os << " }\n";
    }
    for (size_t t = 0; t < d.edges.size(); ++t) {
        const IntMat& e = d.edges[t];
        for (Eigen::Index i = 0; i < e.rows(); ++i)
            for (Eigen::Index j = 0; j < e.cols(); ++j) {
                if (e(i, j) == 0) continue;
                os << "  L" << t << "_" << i << " -> L" << (t + 1) << "_" << j << " [label=\""
                   << e(i, j).get_str() << "\"];\n";
            }
    }
    os << "}\n";
    return os.str();
}

} // namespace r2d
