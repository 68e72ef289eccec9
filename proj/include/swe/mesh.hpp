#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "swe/core.hpp"

namespace swe {

// Stencil member kinds. Cell members carry cell-average values, node members
// carry vertex-reconstructed values, ghost members carry boundary ghost states
// at the mirrored centroid position.
enum class MemberKind : int { Cell = 0, Node = 1, Ghost = 2 };

struct StencilMember {
    MemberKind kind;
    int id;  // cell id, node id, or owning boundary edge id for ghosts
};

struct Edge {
    int n0 = -1;           // endpoint nodes, ordered so normal = perp(p1 - p0)/len
    int n1 = -1;
    int left = -1;         // adjacent cells; normal points left -> right;
    int right = -1;        // right = -1 on the boundary, else left < right
    double len = 0.0;
    Vec2 normal;           // unit
    Vec2 mid;
    int tag = -1;          // boundary tag id, -1 for interior edges
    int bidx = -1;         // compact boundary-edge index, -1 for interior edges

    // Diamond co-volume S-R-N-L (S=n0, N=n1, L=left centroid, R=right centroid
    // or the left centroid mirrored across the edge line on the boundary).
    Vec2 rpos;
    double inv2mu = 0.0;   // 1 / (2 * diamond area)
    Vec2 d_rl;             // perp(R - L); the diamond gradient reads
                           // grad u = inv2mu * ((uS-uN) d_rl + (uR-uL) d_ns)
                           // with d_ns = normal * len
};

// Rectangle triangulation styles. Alternating/Fixed split a square lattice
// along quad diagonals; Offset staggers every other node row by half a cell,
// which yields near-equilateral triangles when dy ~ dx * sqrt(3)/2.
enum class DiagonalPattern { Alternating, Fixed, Offset };

// Recipe for building a mesh inside the driver: either a file, a uniform
// rectangle, or a masked tick lattice (for composite domains).
struct MeshRecipe {
    std::string file;  // when non-empty, wins
    double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
    int nx = 10, ny = 10;
    DiagonalPattern pattern = DiagonalPattern::Alternating;
    std::vector<double> x_ticks, y_ticks;               // masked lattice mode
    std::function<bool(Vec2)> keep;                     // quad-center predicate
};

struct Mesh {
    // geometry and connectivity
    std::vector<Vec2> nodes;
    std::vector<std::array<int, 3>> tris;               // CCW vertex ids
    std::vector<Vec2> centroid;
    std::vector<double> area;
    std::vector<Edge> edges;
    std::vector<std::array<int, 3>> cell_edges;         // edge k spans (v_k, v_{k+1})
    std::vector<std::array<int, 3>> cell_neighbors;     // -1 across boundary edges
    std::vector<int> boundary_edges;                    // edge ids, ascending

    // vertex fans with inverse-centroid-distance weights (CSR)
    std::vector<int> vert_ptr;
    std::vector<int> vert_cell;
    std::vector<double> vert_w;

    // per-edge interpolation stencil (CSR over StencilMember); boundary edges
    // do NOT list their ghost member, callers append it when needed
    std::vector<int> sten_ptr;
    std::vector<StencilMember> sten;

    // per-cell interpolation stencil used along characteristics (CSR)
    std::vector<int> cell_sten_ptr;
    std::vector<StencilMember> cell_sten;

    std::vector<std::string> tag_names;
    double total_area = 0.0;
    double max_edge_len = 0.0;
    Vec2 bbox_lo, bbox_hi;

    int n_cells() const { return static_cast<int>(tris.size()); }
    int n_nodes() const { return static_cast<int>(nodes.size()); }
    int n_edges() const { return static_cast<int>(edges.size()); }
    int tag_id(const std::string& name) const;  // -1 if absent

    // Outward unit normal of edge e as seen from cell c (flips the stored
    // normal when c is the right cell).
    Vec2 outward_normal(int e, int c) const {
        const Edge& ed = edges[e];
        return ed.left == c ? ed.normal : -1.0 * ed.normal;
    }

    Vec2 member_pos(const StencilMember& m) const {
        switch (m.kind) {
            case MemberKind::Cell: return centroid[m.id];
            case MemberKind::Node: return nodes[m.id];
            default: return edges[m.id].rpos;
        }
    }
};

// Validates, reorients triangles CCW, builds edges/diamonds/stencils.
// boundary_tags maps unordered node pairs of boundary edges to tag names;
// boundary edges absent from the map get the tag "untagged".
Mesh build_mesh(std::vector<Vec2> nodes, std::vector<std::array<int, 3>> tris,
                const std::map<std::pair<int, int>, std::string>& boundary_tags = {});

// Uniform rectangle split into triangles; sides tagged left/right/bottom/top.
Mesh generate_rect_mesh(double x0, double y0, double x1, double y1, int nx, int ny,
                        DiagonalPattern pattern = DiagonalPattern::Alternating);

// Masked tick-lattice mesh: quads whose center fails `keep` are dropped.
// All boundary edges are tagged "wall".
Mesh generate_masked_mesh(const std::vector<double>& x_ticks, const std::vector<double>& y_ticks,
                          const std::function<bool(Vec2)>& keep);

Mesh build_from_recipe(const MeshRecipe& recipe);

// ASCII mesh file: "NNODES NTRIS NBEDGES" header, node lines "x y", triangle
// lines "a b c" (0-based), boundary edge lines "i j TAG"; '#' comments.
Mesh read_mesh_file(const std::string& path);
void write_mesh_file(const Mesh& mesh, const std::string& path);

// Containing cell of p, or -1 when p is outside the domain. Points on shared
// edges resolve to the lower cell id. `hint` seeds the walk.
int locate_point(const Mesh& mesh, Vec2 p, int hint = 0);

}  // namespace swe
