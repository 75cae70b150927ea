#pragma once

#include "r2d/common.hpp"
#include "r2d/rational.hpp"
#include "r2d/sft.hpp"

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace r2d {

/// Rank-2 graph data: two edge sets over a common vertex set and the
/// factorization bijection rho.
///
/// Orientation convention (fixed for reproducibility): edges point toward
/// the origin, r(e) at the near end and s(e) at the far end. A unit square
/// with corners A=(0,0), B=(1,0), C=(0,1), D=(1,1) has bottom b (r=A,s=B),
/// right rv (r=B,s=D), left l (r=A,s=C), top t (r=C,s=D), and
/// rho(b, rv) = (l, t). In pair language rho maps (e,f) in G1*G2 with
/// s(e)=r(f) to (f',e') in G2*G1 with s(f')=r(e'), r(f')=r(e), s(e')=s(f).
struct Rank2Graph {
    struct Edge {
        std::string name;
        int src = 0;  // s(e)
        int rng = 0;  // r(e)
    };

    std::vector<std::string> vertices;
    std::vector<Edge> hEdges;  // G1, horizontal
    std::vector<Edge> vEdges;  // G2, vertical

    /// rho[(h,v)] = (v', h'); key = h * |G2| + v.
    std::unordered_map<std::uint64_t, std::pair<int, int>> rho;
    std::unordered_map<std::uint64_t, std::pair<int, int>> rhoInv;  // built by validate

    std::uint64_t pair_key(int h, int v) const {
        return static_cast<std::uint64_t>(h) * vEdges.size() + static_cast<std::uint64_t>(v);
    }

    IntMat vertex_matrix_h() const;  // M1(u,w) = #{e in G1 : r(e)=u, s(e)=w}
    IntMat vertex_matrix_v() const;  // M2 likewise
};

/// Completed rectangular grid of shape (m,n): m horizontal steps, n vertical
/// steps, rooted at `origin` = the vertex at lattice point (0,0). h[j*m+i] is
/// the horizontal edge between (i,j)-(i+1,j) (m per row, n+1 rows); v[j*(m+1)+i]
/// the vertical edge between (i,j)-(i,j+1) (m+1 per row, n rows).
struct GridPattern {
    Vec2 shape;
    int origin = 0;
    std::vector<int> h;
    std::vector<int> v;

    int hEdge(int i, int j) const { return h[static_cast<size_t>(j) * shape.x + i]; }
    int vEdge(int i, int j) const { return v[static_cast<size_t>(j) * (shape.x + 1) + i]; }

    friend bool operator==(const GridPattern& a, const GridPattern& b) {
        return a.shape == b.shape && a.origin == b.origin && a.h == b.h && a.v == b.v;
    }
    friend bool operator<(const GridPattern& a, const GridPattern& b) {
        if (a.shape != b.shape) return a.shape < b.shape;
        if (a.origin != b.origin) return a.origin < b.origin;
        if (a.h != b.h) return a.h < b.h;
        return a.v < b.v;
    }
};

/// Bijectivity of rho, endpoint compatibility, and commutation of the vertex
/// matrices. Noncommuting matrices are a hard error: the composable-pair sets
/// G1*G2 and G2*G1 then differ in cardinality over some vertex pair and no
/// endpoint-compatible bijection can exist. Builds g.rhoInv on success.
ValidationReport validate_rank2_graph(Rank2Graph& g);

/// Unique rho-consistent grid with the given bottom side e1..em (e1 at the
/// origin) and right side f1..fn (f1 at the bottom-right corner). Paths
/// compose like morphisms: s(e_i) = r(e_{i+1}), and s(e_m) = r(f_1).
GridPattern complete_grid(const Rank2Graph& g, const std::vector<int>& hSide,
                          const std::vector<int>& vSide);

/// All grids of the given shape with range vertex `rangeVertex` (lex order),
/// or across all vertices when rangeVertex < 0.
std::vector<GridPattern> grids_of_shape(const Rank2Graph& g, Vec2 shape, int rangeVertex = -1);

struct PathCountReport {
    Integer count = 0;                    // composable (hSide, vSide) pairs at the vertex
    std::vector<GridPattern> listing;     // completed grids, when requested
};
PathCountReport paths_of_shape(const Rank2Graph& g, Vec2 shape, int rangeVertex,
                               bool with_listing = true);

GridPattern grid_shift(const Rank2Graph& g, const GridPattern& p, Vec2 k);
GridPattern grid_truncate(const Rank2Graph& g, const GridPattern& p, Vec2 shape);

/// Vertex of the grid at lattice point (i,j).
int grid_vertex(const Rank2Graph& g, const GridPattern& p, int i, int j);

/// Preimages of `target` under the horizontal (direction 1) or vertical
/// (direction 2) shift: one grid per edge of the matching kind whose source
/// is the target's origin vertex. Sorted.
std::vector<GridPattern> grid_fiber(const Rank2Graph& g, const GridPattern& target, int direction);

/// Swap horizontal and vertical structure; rho becomes rho^{-1}. Transposes
/// of valid graphs are valid.
Rank2Graph transpose(const Rank2Graph& g);
GridPattern transpose(const GridPattern& p);

std::string grid_to_string(const Rank2Graph& g, const GridPattern& p);

} // namespace r2d
