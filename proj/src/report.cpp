#include "r2d/report.hpp"

namespace r2d {

json to_json(const Rational& q) { return rational_to_string(q); }
json to_json(const CRat& c) { return to_string(c); }
json to_json(Vec2 v) { return json::array({v.x, v.y}); }

json pattern_json(const ModelHandle& model, const Pattern& p) {
    return pattern_to_string(model, p);
}

json to_json(const ValidationReport& rep) {
    json j;
    j["ok"] = rep.ok;
    json issues = json::array();
    for (const auto& i : rep.issues) issues.push_back({{"code", i.code}, {"detail", i.detail}});
    j["issues"] = issues;
    j["nonemptyAtDepth"] = rep.nonempty_at_depth;
    j["patternCountAtDepth"] = rep.pattern_count_at_depth.get_str();
    j["extendable"] = rep.extendable;
    return j;
}

json to_json(const ModelHandle& model, const LocalInjectivityVerdict& v) {
    json j;
    switch (v.status) {
        case LocalInjectivityVerdict::Status::VerifiedAtDepth: j["status"] = "VerifiedAtDepth"; break;
        case LocalInjectivityVerdict::Status::RefutedWithWitness:
            j["status"] = "RefutedWithWitness";
            break;
        case LocalInjectivityVerdict::Status::Inconclusive: j["status"] = "Inconclusive"; break;
    }
    j["direction"] = v.direction;
    json w = json::array();
    for (Vec2 c : v.window) w.push_back(to_json(c));
    j["window"] = w;
    j["depth"] = to_json(v.depth);
    if (v.witness) {
        j["witness"] = {{"first", pattern_json(model, v.witness->first)},
                        {"second", pattern_json(model, v.witness->second)}};
    }
    j["note"] = v.note;
    return j;
}

json to_json(const ModelHandle& model, const OpenSurjectiveReport& rep) {
    json j;
    j["surjectiveAtDepth"] = rep.surjective_at_depth;
    json w = json::array();
    for (const auto& p : rep.empty_fiber_witnesses) w.push_back(pattern_json(model, p));
    j["emptyFiberWitnesses"] = w;
    j["openAtDepth"] = rep.open_at_depth;
    if (!rep.open_note.empty()) j["openNote"] = rep.open_note;
    return j;
}

json to_json(const ModelHandle& model, const OrbitReachReport& rep) {
    json j;
    j["reachedCount"] = static_cast<long>(rep.reached.size());
    j["admissibleCount"] = rep.admissible_count.get_str();
    j["full"] = rep.full;
    json r = json::array();
    for (const auto& p : rep.reached) r.push_back(pattern_json(model, p));
    j["reached"] = r;
    return j;
}

json to_json(const ModelHandle& model, const PeriodicityReport& rep) {
    json j;
    j["p"] = to_json(rep.p);
    j["q"] = to_json(rep.q);
    j["depth"] = to_json(rep.depth);
    j["consistentCount"] = rep.consistent_count.get_str();
    json c = json::array();
    for (const auto& p : rep.consistent) c.push_back(pattern_json(model, p));
    j["consistent"] = c;
    j["allPointsPeriodic"] = rep.all_points_periodic;
    j["evidencePositive"] = rep.evidence_positive;
    json s = json::array();
    for (const auto& p : rep.stuck) s.push_back(pattern_json(model, p));
    j["stuck"] = s;
    return j;
}

json to_json(const OperatorMatrix& m) {
    json j;
    j["tag"] = to_string(m.tag);
    j["rows"] = static_cast<long>(m.entries.rows());
    j["cols"] = static_cast<long>(m.entries.cols());
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.entries.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index jj = 0; jj < m.entries.cols(); ++jj) row.push_back(to_string(m.entries(i, jj)));
        rows.push_back(row);
    }
    j["entries"] = rows;
    if (m.domain.laurent) {
        j["domain"] = {{"laurent", true}, {"lo", m.domain.lo}, {"hi", m.domain.hi}};
        j["codomain"] = {{"laurent", true}, {"lo", m.codomain.lo}, {"hi", m.codomain.hi}};
    } else {
        j["domain"] = {{"laurent", false}, {"depth", to_json(m.domain.pattern_basis->depth)},
                       {"size", static_cast<long>(m.domain.pattern_basis->size())}};
        j["codomain"] = {{"laurent", false}, {"depth", to_json(m.codomain.pattern_basis->depth)},
                         {"size", static_cast<long>(m.codomain.pattern_basis->size())}};
    }
    return j;
}

json to_json(const ModelHandle& model, const RnAlgebraDescription& d) {
    (void)model;
    json j;
    j["n"] = to_json(d.n);
    j["depth"] = to_json(d.depth);
    switch (d.base) {
        case RnAlgebraDescription::Base::Finite: j["base"] = "finite"; break;
        case RnAlgebraDescription::Base::Circle: j["base"] = "circle"; break;
        case RnAlgebraDescription::Base::NonDiscrete: j["base"] = "nondiscrete"; break;
    }
    json sizes = json::array();
    for (const auto& s : d.block_sizes) sizes.push_back(s.get_str());
    j["blockSizes"] = sizes;
    if (d.base == RnAlgebraDescription::Base::Circle)
        j["circleMatrixSize"] = d.circle_matrix_size.get_str();
    if (!d.class_measures.empty()) {
        json m = json::array();
        for (const auto& q : d.class_measures) m.push_back(rational_to_string(q));
        j["classMeasures"] = m;
    }
    return j;
}

json to_json(const IntMat& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j).get_str());
        rows.push_back(row);
    }
    return rows;
}

json to_json(const InclusionMultiplicity& inc) {
    json j;
    json f = json::array(), t = json::array();
    for (const auto& s : inc.from_sizes) f.push_back(s.get_str());
    for (const auto& s : inc.to_sizes) t.push_back(s.get_str());
    j["fromSizes"] = f;
    j["toSizes"] = t;
    j["mult"] = to_json(inc.mult);
    return j;
}

json to_json(const CommutingExpectationsReport& rep) {
    json j;
    j["commute"] = rep.commute;
    j["depth"] = to_json(rep.depth);
    if (!rep.commute) {
        j["witness"] = rep.witness;
        j["deviation"] = to_string(rep.deviation);
    }
    return j;
}

json to_json(const FlipReport& rep) {
    json j;
    j["innerProductsPreserved"] = rep.inner_products_preserved;
    j["pairsChecked"] = rep.pairs_checked;
    if (!rep.witness.empty()) j["witness"] = rep.witness;
    return j;
}

json to_json(const GrowthReport& rep) {
    json j;
    j["direction"] = rep.direction;
    json entries = json::array();
    for (const auto& e : rep.entries)
        entries.push_back({{"depthIndex", e.depth_index},
                           {"depth", to_json(e.depth)},
                           {"thetaCount", e.theta_count.get_str()},
                           {"reconstructionExact", e.reconstruction_exact}});
    j["entries"] = entries;
    j["strictlyIncreasing"] = rep.strictly_increasing;
    j["constant"] = rep.constant;
    return j;
}

json to_json(const BratteliDiagram& d) {
    json j;
    json levels = json::array();
    for (const auto& lv : d.levels) {
        json sizes = json::array(), counts = json::array();
        for (const auto& s : lv.sizes) sizes.push_back(s.get_str());
        for (const auto& c : lv.counts) counts.push_back(c.get_str());
        levels.push_back({{"n", to_json(lv.n)},
                          {"sizes", sizes},
                          {"counts", counts},
                          {"base", lv.base},
                          {"labels", lv.labels}});
    }
    j["levels"] = levels;
    json edges = json::array();
    for (const auto& e : d.edges) edges.push_back(to_json(e));
    j["edges"] = edges;
    return j;
}

json to_json(const DimensionGroupReport& rep) {
    json j;
    j["stationary"] = rep.stationary;
    if (rep.stationary_matrix) j["stationaryMatrix"] = to_json(*rep.stationary_matrix);
    if (rep.supernatural) {
        j["supernatural"] = supernatural_to_string(*rep.supernatural);
        json sn;
        for (const auto& [p, e] : *rep.supernatural)
            sn[p.get_str()] = e == kInfiniteExponent ? json("inf") : json(e);
        j["supernaturalExponents"] = sn;
    }
    if (rep.char_poly) {
        json cp = json::array();
        for (const auto& c : *rep.char_poly) cp.push_back(c.get_str());
        j["charPoly"] = cp;
    }
    j["primitive"] = rep.primitive;
    if (rep.primitive_power >= 0) j["primitivePower"] = rep.primitive_power;
    if (!rep.primitivity_note.empty()) j["primitivityNote"] = rep.primitivity_note;
    if (!rep.k0_note.empty()) j["k0"] = rep.k0_note;
    return j;
}

json to_json(const SimplicityReport& rep) {
    json j;
    switch (rep.verdict) {
        case SimplicityReport::Verdict::EvidenceForSimple: j["verdict"] = "evidence-for-simple"; break;
        case SimplicityReport::Verdict::Inconclusive: j["verdict"] = "inconclusive"; break;
        case SimplicityReport::Verdict::ObstructionFound: j["verdict"] = "obstruction-found"; break;
    }
    json mins = json::array();
    for (const auto& m : rep.minimality)
        mins.push_back({{"seed", m.seed},
                        {"full", m.full},
                        {"stabilizedBelowFull", m.stabilized_below_full},
                        {"reached", m.reached.get_str()},
                        {"total", m.total.get_str()}});
    j["minimalityEvidence"] = mins;
    json frees = json::array();
    for (const auto& f : rep.freeness)
        frees.push_back({{"p", to_json(f.p)},
                         {"q", to_json(f.q)},
                         {"consistentCount", f.consistent_count.get_str()},
                         {"allPointsPeriodic", f.all_points_periodic},
                         {"evidencePositive", f.evidence_positive}});
    j["essentialFreenessEvidence"] = frees;
    j["note"] = rep.note;
    return j;
}

json to_json(const CoreCheckReport& rep) {
    json j;
    j["n1"] = rep.n1;
    j["n2"] = rep.n2;
    j["levels"] = rep.levels;
    json sizes = json::array();
    for (const auto& s : rep.sizes) sizes.push_back(s.get_str());
    j["sizes"] = sizes;
    j["sizesMatchPower"] = rep.sizes_match_power;
    j["flipPreservesInner"] = rep.flip_preserves_inner;
    return j;
}

} // namespace r2d
