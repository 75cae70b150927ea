#include "r2d/model_io.hpp"

#include <fstream>
#include <set>

namespace r2d {

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string fingerprint_of(const json& j) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(j.dump())));
    return std::string("fnv1a64:") + buf;
}

namespace {

void reject_unknown_fields(const json& j, const std::set<std::string>& known,
                           const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            throw Error("parse-error", "unknown field '" + it.key() + "' in " + where);
}

const json& require(const json& j, const std::string& key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) throw Error("parse-error", "missing field '" + key + "' in " + where);
    return *it;
}

std::vector<std::string> parse_alphabet(const json& j) {
    std::vector<std::string> alphabet;
    for (const auto& s : require(j, "alphabet", "model spec")) {
        if (!s.is_string()) throw Error("parse-error", "alphabet entries must be strings");
        alphabet.push_back(s.get<std::string>());
    }
    return alphabet;
}

DirectionMeasure parse_direction_measure(const json& j, const std::vector<std::string>& alphabet,
                                         const std::string& where) {
    reject_unknown_fields(j, {"mode", "weights"}, where);
    DirectionMeasure dm;
    std::string mode = require(j, "mode", where).get<std::string>();
    if (mode == "counting") {
        dm.mode = DirectionMeasure::Mode::CountingNormalized;
    } else if (mode == "product") {
        dm.mode = DirectionMeasure::Mode::ProductWeights;
        const json& w = require(j, "weights", where);
        dm.symbol_weights.assign(alphabet.size(), Rational(0));
        for (auto it = w.begin(); it != w.end(); ++it) {
            auto pos = std::find(alphabet.begin(), alphabet.end(), it.key());
            if (pos == alphabet.end())
                throw Error("parse-error", "weight for unknown symbol '" + it.key() + "'");
            dm.symbol_weights[static_cast<size_t>(pos - alphabet.begin())] =
                parse_rational(it.value().get<std::string>());
        }
    } else {
        throw Error("parse-error", "measure mode must be 'counting' or 'product' in " + where);
    }
    return dm;
}

FiberMeasureSystem parse_measure(const json& j, const std::vector<std::string>& alphabet) {
    reject_unknown_fields(j, {"dir1", "dir2"}, "measure");
    FiberMeasureSystem mu;
    if (j.contains("dir1")) mu.dir1 = parse_direction_measure(j["dir1"], alphabet, "measure.dir1");
    if (j.contains("dir2")) mu.dir2 = parse_direction_measure(j["dir2"], alphabet, "measure.dir2");
    return mu;
}

json canonical_measure(const FiberMeasureSystem& mu, const std::vector<std::string>& alphabet) {
    auto dir = [&](const DirectionMeasure& dm) {
        json d;
        if (dm.mode == DirectionMeasure::Mode::CountingNormalized) {
            d["mode"] = "counting";
        } else {
            d["mode"] = "product";
            json weights;
            for (size_t i = 0; i < alphabet.size(); ++i)
                weights[alphabet[i]] = rational_to_string(dm.symbol_weights[i]);
            d["weights"] = weights;
        }
        return d;
    };
    json m;
    m["dir1"] = dir(mu.dir1);
    m["dir2"] = dir(mu.dir2);
    return m;
}

ParsedModel parse_sft(const json& j) {
    reject_unknown_fields(j, {"kind", "alphabet", "window", "allowed", "measure"}, "sft spec");
    SftSpec spec;
    spec.alphabet = parse_alphabet(j);
    for (const auto& cell : require(j, "window", "sft spec")) {
        if (!cell.is_array() || cell.size() != 2)
            throw Error("parse-error", "window cells must be [x,y] pairs");
        spec.window.push_back({cell[0].get<int>(), cell[1].get<int>()});
    }
    for (const auto& pat : require(j, "allowed", "sft spec")) {
        std::vector<std::uint8_t> row;
        for (const auto& s : pat) {
            int idx = spec.symbol_index(s.get<std::string>());
            if (idx < 0)
                throw Error("parse-error",
                            "allowed pattern uses symbol '" + s.get<std::string>() +
                                "' outside the alphabet");
            row.push_back(static_cast<std::uint8_t>(idx));
        }
        spec.allowed.push_back(std::move(row));
    }

    ParsedModel pm;
    pm.model = build_model(spec);
    pm.measure = j.contains("measure") ? parse_measure(j["measure"], spec.alphabet)
                                       : default_measure(pm.model);
    validate_measure(pm.model, pm.measure);

    const SftSpec& norm = pm.model.sft();
    json c;
    c["kind"] = "sft";
    c["alphabet"] = norm.alphabet;
    json window = json::array();
    for (Vec2 w : norm.window) window.push_back({w.x, w.y});
    c["window"] = window;
    json allowed = json::array();
    for (const auto& a : norm.allowed) {
        json row = json::array();
        for (std::uint8_t s : a) row.push_back(norm.alphabet[s]);
        allowed.push_back(row);
    }
    c["allowed"] = allowed;
    c["measure"] = canonical_measure(pm.measure, norm.alphabet);
    pm.canonical = c;
    return pm;
}

ParsedModel parse_fullshift(const json& j) {
    reject_unknown_fields(j, {"kind", "alphabet", "measure"}, "fullshift spec");
    std::vector<std::string> alphabet = parse_alphabet(j);
    ParsedModel pm;
    pm.model = build_model_full_shift(alphabet);
    pm.measure = j.contains("measure") ? parse_measure(j["measure"], alphabet)
                                       : default_measure(pm.model);
    validate_measure(pm.model, pm.measure);
    json c;
    c["kind"] = "fullshift";
    c["alphabet"] = alphabet;
    c["measure"] = canonical_measure(pm.measure, alphabet);
    pm.canonical = c;
    return pm;
}

ParsedModel parse_circle(const json& j) {
    reject_unknown_fields(j, {"kind", "degrees"}, "circle spec");
    const json& d = require(j, "degrees", "circle spec");
    if (!d.is_array() || d.size() != 2)
        throw Error("parse-error", "degrees must be a [p1,p2] pair");
    ParsedModel pm;
    pm.model = build_model_circle(d[0].get<long>(), d[1].get<long>());
    pm.measure = default_measure(pm.model);
    json c;
    c["kind"] = "circle";
    c["degrees"] = {pm.model.circle().p1, pm.model.circle().p2};
    pm.canonical = c;
    return pm;
}

ParsedModel parse_kgraph(const json& j) {
    reject_unknown_fields(j, {"kind", "vertices", "hEdges", "vEdges", "rho"}, "kgraph spec");
    Rank2Graph g;
    for (const auto& v : require(j, "vertices", "kgraph spec")) g.vertices.push_back(v.get<std::string>());
    auto vertex_index = [&](const std::string& name) {
        for (size_t i = 0; i < g.vertices.size(); ++i)
            if (g.vertices[i] == name) return static_cast<int>(i);
        throw Error("parse-error", "unknown vertex '" + name + "'");
    };
    auto parse_edges = [&](const json& arr, const std::string& where) {
        std::vector<Rank2Graph::Edge> edges;
        for (const auto& e : arr) {
            reject_unknown_fields(e, {"name", "src", "rng"}, where);
            Rank2Graph::Edge edge;
            edge.name = require(e, "name", where).get<std::string>();
            edge.src = vertex_index(require(e, "src", where).get<std::string>());
            edge.rng = vertex_index(require(e, "rng", where).get<std::string>());
            edges.push_back(std::move(edge));
        }
        return edges;
    };
    g.hEdges = parse_edges(require(j, "hEdges", "kgraph spec"), "hEdges");
    g.vEdges = parse_edges(require(j, "vEdges", "kgraph spec"), "vEdges");

    auto h_index = [&](const std::string& name) {
        for (size_t i = 0; i < g.hEdges.size(); ++i)
            if (g.hEdges[i].name == name) return static_cast<int>(i);
        throw Error("parse-error", "unknown horizontal edge '" + name + "'");
    };
    auto v_index = [&](const std::string& name) {
        for (size_t i = 0; i < g.vEdges.size(); ++i)
            if (g.vEdges[i].name == name) return static_cast<int>(i);
        throw Error("parse-error", "unknown vertical edge '" + name + "'");
    };
    for (const auto& row : require(j, "rho", "kgraph spec")) {
        if (!row.is_array() || row.size() != 4)
            throw Error("parse-error", "rho rows must be [h, v, v', h'] quadruples");
        int h = h_index(row[0].get<std::string>());
        int v = v_index(row[1].get<std::string>());
        int vp = v_index(row[2].get<std::string>());
        int hp = h_index(row[3].get<std::string>());
        if (g.rho.count(g.pair_key(h, v)))
            throw Error("parse-error", "duplicate rho row for (" + row[0].get<std::string>() + "," +
                                           row[1].get<std::string>() + ")");
        g.rho.emplace(g.pair_key(h, v), std::make_pair(vp, hp));
    }

    ParsedModel pm;
    pm.model = build_model(g);
    pm.measure = default_measure(pm.model);

    const Rank2Graph& ng = pm.model.graph();
    json c;
    c["kind"] = "kgraph";
    c["vertices"] = ng.vertices;
    auto edges_json = [&](const std::vector<Rank2Graph::Edge>& edges) {
        json arr = json::array();
        for (const auto& e : edges) {
            json je;
            je["name"] = e.name;
            je["src"] = ng.vertices[e.src];
            je["rng"] = ng.vertices[e.rng];
            arr.push_back(je);
        }
        return arr;
    };
    c["hEdges"] = edges_json(ng.hEdges);
    c["vEdges"] = edges_json(ng.vEdges);
    std::map<std::pair<int, int>, std::pair<int, int>> sorted_rho;
    for (const auto& [key, val] : ng.rho)
        sorted_rho[{static_cast<int>(key / ng.vEdges.size()),
                    static_cast<int>(key % ng.vEdges.size())}] = val;
    json rho = json::array();
    for (const auto& [hv, vphp] : sorted_rho)
        rho.push_back({ng.hEdges[hv.first].name, ng.vEdges[hv.second].name,
                       ng.vEdges[vphp.first].name, ng.hEdges[vphp.second].name});
    c["rho"] = rho;
    pm.canonical = c;
    return pm;
}

} // namespace

ParsedModel parse_model_json(const json& j) {
    if (!j.is_object()) throw Error("parse-error", "model spec must be a JSON object");
    std::string kind = require(j, "kind", "model spec").get<std::string>();
    ParsedModel pm;
    if (kind == "sft")
        pm = parse_sft(j);
    else if (kind == "fullshift")
        pm = parse_fullshift(j);
    else if (kind == "circle")
        pm = parse_circle(j);
    else if (kind == "kgraph")
        pm = parse_kgraph(j);
    else
        throw Error("parse-error", "unknown model kind '" + kind + "'");
    pm.fingerprint = fingerprint_of(pm.canonical);
    return pm;
}

ParsedModel parse_model_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("parse-error", "cannot read model spec file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Error("parse-error", std::string("invalid JSON: ") + e.what());
    }
    return parse_model_json(j);
}

} // namespace r2d
