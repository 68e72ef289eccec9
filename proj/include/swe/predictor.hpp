#pragma once

#include <vector>

#include "swe/boundary.hpp"
#include "swe/fields.hpp"
#include "swe/mesh.hpp"
#include "swe/model.hpp"

namespace swe {

// Pseudo-Laplacian least-squares interpolation weights for estimating a field
// at `at` from samples located at `pts`. Weights always sum to one and
// reproduce linear fields when the point cloud has non-degenerate second
// moments about `at`; otherwise the arithmetic mean is used and `degenerate`
// is set.
struct LsmWeights {
    int n = 0;
    bool degenerate = false;
};
LsmWeights lsm_weights(const Vec2* pts, int n, Vec2 at, double* w);
std::vector<double> lsm_weights(const std::vector<Vec2>& pts, Vec2 at, bool* degenerate = nullptr);

// Gradient of a piecewise field over the diamond (S=n0, R=right, N=n1, L=left)
// spanned by an edge. Exact for linear fields on any non-degenerate diamond.
Vec2 diamond_gradient(double u_s, double u_n, double u_l, double u_r,
                      Vec2 S, Vec2 N, Vec2 L, Vec2 R);

// Inverse-centroid-distance average of a cell field at vertex v.
double vertex_value(const Mesh& mesh, const double* cell_field, int v);

// Vertex fields used as interpolation stencil members. `h` is reconstructed
// as the averaged free surface minus the sampled node bed so that a flat free
// surface yields exactly flat nodal surfaces regardless of bed shape.
struct NodeValues {
    std::vector<double> surf, h, hu, hv;
};
void compute_node_values(const Mesh& mesh, const State& st, const Bed& bed, NodeValues& nv);

// Ghost data attached to each boundary edge: mirror-cell state produced by
// the boundary condition table plus the bed elevation carried over from the
// interior cell.
struct EdgeGhost {
    Conserved w;
    double z = 0.0;
};
void compute_ghosts(const Mesh& mesh, const State& st, const Bed& bed,
                    const std::vector<BoundaryCondition>& bc_by_tag, double g, double t,
                    std::vector<EdgeGhost>& out);

// Departure point of the characteristic trajectory through an edge midpoint,
// integrating ds/dtau = u.n backwards over `sigma` with a third-order
// Runge-Kutta rule. The foot is clamped to the domain when the ray exits it;
// `ghost_edge` is then the boundary edge crossed (-1 otherwise).
struct Departure {
    Vec2 foot;
    double s = 0.0;
    bool clamped = false;
    int cell = -1;        // containing cell (-1 when the foot is the midpoint)
    int ghost_edge = -1;  // boundary edge whose ghost joins the stencil
};

struct PredictorWorkspace {
    const Mesh* mesh = nullptr;
    std::vector<double> w_mid;  // midpoint weights, CSR-aligned with mesh.sten
    std::vector<Vec2> pos;
    std::vector<double> val_h, val_hu, val_hv, val_z, wbuf;
    void bind(const Mesh& m);
};

Departure backtrack_departure(const Mesh& mesh, const State& st, const NodeValues& nv,
                              int edge, double sigma, double h_min, PredictorWorkspace& ws);

// Field values interpolated at a departure point from the edge stencil
// (optionally extended by a boundary-edge ghost). Throws when the
// interpolated depth is not positive.
struct FootState {
    double h = 0.0, hu = 0.0, hv = 0.0;
    bool fallback = false;
};
FootState interpolate_foot(const Mesh& mesh, const State& st, const NodeValues& nv,
                           const std::vector<EdgeGhost>& ghosts, int edge, Vec2 at,
                           int ghost_edge, double h_min, PredictorWorkspace& ws);

struct PredictorStats {
    long clamped_feet = 0;
    long lsm_fallbacks = 0;
};

// Predictor sweep: computes the intermediate interface state on every edge.
// At boundary edges the condition table is applied to the predicted trace, so
// wall edges carry exactly zero normal discharge.
void predict_interfaces(const Mesh& mesh, const State& st, const Bed& bed,
                        const NodeValues& nv, const std::vector<EdgeGhost>& ghosts,
                        const std::vector<BoundaryCondition>& bc_by_tag,
                        const PhysicalParams& par, double dt, PredictorWorkspace& ws,
                        std::vector<Conserved>& w_edge, PredictorStats* stats = nullptr);

}  // namespace swe
