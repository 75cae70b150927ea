#include "r2d/kgraph.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace r2d {

namespace {

std::uint64_t inv_key(const Rank2Graph& g, int v, int h) {
    return static_cast<std::uint64_t>(v) * g.hEdges.size() + static_cast<std::uint64_t>(h);
}

IntMat vertex_matrix(const std::vector<Rank2Graph::Edge>& edges, size_t nverts) {
    IntMat m(nverts, nverts);
    m.setConstant(Integer(0));
    for (const auto& e : edges) m(e.rng, e.src) += 1;
    return m;
}

} // namespace

IntMat Rank2Graph::vertex_matrix_h() const { return vertex_matrix(hEdges, vertices.size()); }
IntMat Rank2Graph::vertex_matrix_v() const { return vertex_matrix(vEdges, vertices.size()); }

ValidationReport validate_rank2_graph(Rank2Graph& g) {
    ValidationReport rep;
    if (g.vertices.empty()) rep.fail("empty-vertex-set", "graph has no vertices");
    const int nv = static_cast<int>(g.vertices.size());
    for (const auto& e : g.hEdges)
        if (e.src < 0 || e.src >= nv || e.rng < 0 || e.rng >= nv)
            rep.fail("endpoint-mismatch", "horizontal edge " + e.name + " has out-of-range endpoint");
    for (const auto& e : g.vEdges)
        if (e.src < 0 || e.src >= nv || e.rng < 0 || e.rng >= nv)
            rep.fail("endpoint-mismatch", "vertical edge " + e.name + " has out-of-range endpoint");
    if (!rep.ok) return rep;

    IntMat m1 = g.vertex_matrix_h();
    IntMat m2 = g.vertex_matrix_v();
    if (!exactly_equal(IntMat(m1 * m2), IntMat(m2 * m1))) {
        rep.fail("noncommuting-vertex-matrices",
                 "M1*M2 != M2*M1; no factorization bijection can exist");
        return rep;
    }

    // Domain must be exactly G1*G2.
    std::set<std::uint64_t> seen;
    for (size_t h = 0; h < g.hEdges.size(); ++h)
        for (size_t v = 0; v < g.vEdges.size(); ++v) {
            bool composable = g.hEdges[h].src == g.vEdges[v].rng;
            auto it = g.rho.find(g.pair_key(static_cast<int>(h), static_cast<int>(v)));
            if (composable && it == g.rho.end())
                rep.fail("rho-not-bijective", "rho undefined on composable pair (" +
                                                  g.hEdges[h].name + "," + g.vEdges[v].name + ")");
            if (!composable && it != g.rho.end())
                rep.fail("rho-not-bijective", "rho defined on non-composable pair (" +
                                                  g.hEdges[h].name + "," + g.vEdges[v].name + ")");
        }
    if (!rep.ok) return rep;

    g.rhoInv.clear();
    for (const auto& [key, val] : g.rho) {
        int h = static_cast<int>(key / g.vEdges.size());
        int v = static_cast<int>(key % g.vEdges.size());
        auto [vp, hp] = val;
        if (vp < 0 || vp >= static_cast<int>(g.vEdges.size()) || hp < 0 ||
            hp >= static_cast<int>(g.hEdges.size())) {
            rep.fail("endpoint-mismatch", "rho value out of range");
            continue;
        }
        const auto& e = g.hEdges[h];
        const auto& f = g.vEdges[v];
        const auto& fp = g.vEdges[vp];
        const auto& ep = g.hEdges[hp];
        if (fp.src != ep.rng || fp.rng != e.rng || ep.src != f.src) {
            rep.fail("endpoint-mismatch", "rho(" + e.name + "," + f.name + ")=(" + fp.name + "," +
                                              ep.name + ") violates square endpoint relations");
            continue;
        }
        std::uint64_t ik = inv_key(g, vp, hp);
        if (g.rhoInv.count(ik)) {
            rep.fail("rho-not-bijective", "rho not injective at (" + fp.name + "," + ep.name + ")");
            continue;
        }
        g.rhoInv.emplace(ik, std::make_pair(h, v));
    }
    // Injective with equal domain and codomain cardinality (commutation) is
    // bijective; still verify the count for safety.
    if (rep.ok && g.rhoInv.size() != g.rho.size())
        rep.fail("rho-not-bijective", "rho image smaller than domain");
    return rep;
}

GridPattern complete_grid(const Rank2Graph& g, const std::vector<int>& hSide,
                          const std::vector<int>& vSide) {
    const int m = static_cast<int>(hSide.size());
    const int n = static_cast<int>(vSide.size());
    if (m == 0 && n == 0)
        throw Error("incomposable-sides", "both sides empty: origin vertex undetermined");
    for (int i = 0; i + 1 < m; ++i)
        if (g.hEdges[hSide[i]].src != g.hEdges[hSide[i + 1]].rng)
            throw Error("incomposable-sides", "horizontal side is not a composable path");
    for (int j = 0; j + 1 < n; ++j)
        if (g.vEdges[vSide[j]].src != g.vEdges[vSide[j + 1]].rng)
            throw Error("incomposable-sides", "vertical side is not a composable path");
    if (m > 0 && n > 0 && g.hEdges[hSide[m - 1]].src != g.vEdges[vSide[0]].rng)
        throw Error("incomposable-sides", "sides do not share the corner vertex");

    GridPattern p;
    p.shape = {m, n};
    p.origin = m > 0 ? g.hEdges[hSide[0]].rng : g.vEdges[vSide[0]].rng;
    p.h.assign(static_cast<size_t>(m) * (n + 1), -1);
    p.v.assign(static_cast<size_t>(n) * (m + 1), -1);
    for (int i = 0; i < m; ++i) p.h[static_cast<size_t>(i)] = hSide[i];
    for (int j = 0; j < n; ++j) p.v[static_cast<size_t>(j) * (m + 1) + m] = vSide[j];

    for (int j = 0; j < n; ++j)
        for (int i = m - 1; i >= 0; --i) {
            int e = p.h[static_cast<size_t>(j) * m + i];
            int f = p.v[static_cast<size_t>(j) * (m + 1) + i + 1];
            if (g.hEdges[e].src != g.vEdges[f].rng)
                throw Error("completion-conflict",
                            "square (" + std::to_string(i) + "," + std::to_string(j) +
                                ") has non-composable bottom/right edges");
            auto it = g.rho.find(g.pair_key(e, f));
            if (it == g.rho.end())
                throw Error("completion-conflict", "rho lookup failed during completion");
            p.v[static_cast<size_t>(j) * (m + 1) + i] = it->second.first;
            p.h[static_cast<size_t>(j + 1) * m + i] = it->second.second;
        }
    return p;
}

namespace {

// Paths e1..ek with r(e1) = start; emitted in lexicographic edge-index order.
void enumerate_paths(const std::vector<Rank2Graph::Edge>& edges, int start, int len,
                     std::vector<int>& cur, const std::function<void()>& done) {
    if (static_cast<int>(cur.size()) == len) {
        done();
        return;
    }
    int at = cur.empty() ? start : edges[cur.back()].src;
    for (size_t e = 0; e < edges.size(); ++e) {
        if (edges[e].rng != at) continue;
        cur.push_back(static_cast<int>(e));
        enumerate_paths(edges, start, len, cur, done);
        cur.pop_back();
    }
}

} // namespace

std::vector<GridPattern> grids_of_shape(const Rank2Graph& g, Vec2 shape, int rangeVertex) {
    std::vector<GridPattern> out;
    std::vector<int> verts;
    if (rangeVertex >= 0)
        verts.push_back(rangeVertex);
    else
        for (size_t v = 0; v < g.vertices.size(); ++v) verts.push_back(static_cast<int>(v));

    for (int v0 : verts) {
        std::vector<int> hs;
        enumerate_paths(g.hEdges, v0, shape.x, hs, [&] {
            int corner = hs.empty() ? v0 : g.hEdges[hs.back()].src;
            std::vector<int> vs;
            enumerate_paths(g.vEdges, corner, shape.y, vs, [&] {
                if (hs.empty() && vs.empty()) {
                    GridPattern p;
                    p.shape = {0, 0};
                    p.origin = v0;
                    out.push_back(p);
                } else {
                    out.push_back(complete_grid(g, hs, vs));
                }
            });
        });
    }
    std::sort(out.begin(), out.end());
    return out;
}

PathCountReport paths_of_shape(const Rank2Graph& g, Vec2 shape, int rangeVertex,
                               bool with_listing) {
    if (rangeVertex < 0 || rangeVertex >= static_cast<int>(g.vertices.size()))
        throw Error("unknown-vertex", "vertex index out of range");
    if (!shape.nonneg()) throw Error("bad-shape", "shape components must be nonnegative");
    PathCountReport rep;
    IntMat acc = IntMat::Identity(g.vertices.size(), g.vertices.size());
    IntMat m1 = g.vertex_matrix_h(), m2 = g.vertex_matrix_v();
    for (int i = 0; i < shape.x; ++i) acc = IntMat(acc * m1);
    for (int j = 0; j < shape.y; ++j) acc = IntMat(acc * m2);
    for (size_t u = 0; u < g.vertices.size(); ++u) rep.count += acc(rangeVertex, u);
    if (with_listing) rep.listing = grids_of_shape(g, shape, rangeVertex);
    return rep;
}

int grid_vertex(const Rank2Graph& g, const GridPattern& p, int i, int j) {
    if (p.shape.x > 0) {
        if (i < p.shape.x) return g.hEdges[p.hEdge(i, j)].rng;
        return g.hEdges[p.hEdge(i - 1, j)].src;
    }
    if (p.shape.y > 0) {
        if (j < p.shape.y) return g.vEdges[p.vEdge(i, j)].rng;
        return g.vEdges[p.vEdge(i, j - 1)].src;
    }
    return p.origin;
}

GridPattern grid_shift(const Rank2Graph& g, const GridPattern& p, Vec2 k) {
    Vec2 ns = p.shape - k;
    if (!k.nonneg() || ns.x < 0 || ns.y < 0)
        throw Error("shape-underflow", "shift exceeds grid shape");
    GridPattern q;
    q.shape = ns;
    q.origin = grid_vertex(g, p, k.x, k.y);
    q.h.resize(static_cast<size_t>(ns.x) * (ns.y + 1));
    q.v.resize(static_cast<size_t>(ns.y) * (ns.x + 1));
    for (int j = 0; j <= ns.y; ++j)
        for (int i = 0; i < ns.x; ++i)
            q.h[static_cast<size_t>(j) * ns.x + i] = p.hEdge(i + k.x, j + k.y);
    for (int j = 0; j < ns.y; ++j)
        for (int i = 0; i <= ns.x; ++i)
            q.v[static_cast<size_t>(j) * (ns.x + 1) + i] = p.vEdge(i + k.x, j + k.y);
    return q;
}

GridPattern grid_truncate(const Rank2Graph& g, const GridPattern& p, Vec2 shape) {
    if (!leq(shape, p.shape)) throw Error("shape-underflow", "truncation larger than grid");
    GridPattern q;
    q.shape = shape;
    q.origin = p.origin;
    q.h.resize(static_cast<size_t>(shape.x) * (shape.y + 1));
    q.v.resize(static_cast<size_t>(shape.y) * (shape.x + 1));
    for (int j = 0; j <= shape.y; ++j)
        for (int i = 0; i < shape.x; ++i) q.h[static_cast<size_t>(j) * shape.x + i] = p.hEdge(i, j);
    for (int j = 0; j < shape.y; ++j)
        for (int i = 0; i <= shape.x; ++i)
            q.v[static_cast<size_t>(j) * (shape.x + 1) + i] = p.vEdge(i, j);
    (void)g;
    return q;
}

std::vector<GridPattern> grid_fiber(const Rank2Graph& g, const GridPattern& target, int direction) {
    if (direction == 2) {
        Rank2Graph tg = transpose(g);
        std::vector<GridPattern> out;
        for (const auto& q : grid_fiber(tg, transpose(target), 1)) out.push_back(transpose(q));
        std::sort(out.begin(), out.end());
        return out;
    }
    const int m = target.shape.x, n = target.shape.y;
    std::vector<GridPattern> out;
    for (size_t e0 = 0; e0 < g.hEdges.size(); ++e0) {
        if (g.hEdges[e0].src != target.origin) continue;
        GridPattern p;
        p.shape = {m + 1, n};
        p.origin = g.hEdges[e0].rng;
        p.h.assign(static_cast<size_t>(m + 1) * (n + 1), -1);
        p.v.assign(static_cast<size_t>(n) * (m + 2), -1);
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i < m; ++i)
                p.h[static_cast<size_t>(j) * (m + 1) + i + 1] = target.hEdge(i, j);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i <= m; ++i)
                p.v[static_cast<size_t>(j) * (m + 2) + i + 1] = target.vEdge(i, j);
        p.h[0] = static_cast<int>(e0);
        bool ok = true;
        for (int j = 0; j < n; ++j) {
            int e = p.h[static_cast<size_t>(j) * (m + 1)];
            int f = p.v[static_cast<size_t>(j) * (m + 2) + 1];
            if (g.hEdges[e].src != g.vEdges[f].rng) {
                ok = false;
                break;
            }
            auto it = g.rho.find(g.pair_key(e, f));
            if (it == g.rho.end()) {
                ok = false;
                break;
            }
            p.v[static_cast<size_t>(j) * (m + 2)] = it->second.first;
            p.h[static_cast<size_t>(j + 1) * (m + 1)] = it->second.second;
        }
        if (ok) out.push_back(std::move(p));
    }
    std::sort(out.begin(), out.end());
    return out;
}

Rank2Graph transpose(const Rank2Graph& g) {
    Rank2Graph t;
    t.vertices = g.vertices;
    t.hEdges = g.vEdges;
    t.vEdges = g.hEdges;
    for (const auto& [key, val] : g.rho) {
        int e = static_cast<int>(key / g.vEdges.size());
        int f = static_cast<int>(key % g.vEdges.size());
        auto [fp, ep] = val;  // rho(e,f) = (f', e')
        // In the transpose, rho_t(f', e') = (e, f).
        t.rho.emplace(t.pair_key(fp, ep), std::make_pair(e, f));
        t.rhoInv.emplace(static_cast<std::uint64_t>(e) * t.hEdges.size() + f,
                         std::make_pair(fp, ep));
    }
    return t;
}

GridPattern transpose(const GridPattern& p) {
    GridPattern t;
    t.shape = {p.shape.y, p.shape.x};
    t.origin = p.origin;
    t.h.resize(static_cast<size_t>(t.shape.x) * (t.shape.y + 1));
    t.v.resize(static_cast<size_t>(t.shape.y) * (t.shape.x + 1));
    // transposed horizontal edge (i',j') = original vertical edge (j',i')
    for (int j = 0; j <= t.shape.y; ++j)
        for (int i = 0; i < t.shape.x; ++i)
            t.h[static_cast<size_t>(j) * t.shape.x + i] = p.vEdge(j, i);
    for (int j = 0; j < t.shape.y; ++j)
        for (int i = 0; i <= t.shape.x; ++i)
            t.v[static_cast<size_t>(j) * (t.shape.x + 1) + i] = p.hEdge(j, i);
    return t;
}

std::string grid_to_string(const Rank2Graph& g, const GridPattern& p) {
    std::string s = "@" + g.vertices[p.origin] + ";h:";
    for (size_t i = 0; i < p.h.size(); ++i) {
        if (i) s += ",";
        s += g.hEdges[p.h[i]].name;
    }
    s += ";v:";
    for (size_t i = 0; i < p.v.size(); ++i) {
        if (i) s += ",";
        s += g.vEdges[p.v[i]].name;
    }
    return s;
}

} // namespace r2d
