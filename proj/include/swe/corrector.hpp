#pragma once

#include <array>
#include <vector>

#include "swe/boundary.hpp"
#include "swe/fields.hpp"
#include "swe/mesh.hpp"
#include "swe/model.hpp"
#include "swe/predictor.hpp"

namespace swe {

// Largest stable time step for the current state (already scaled by cfl).
double compute_dt(const Mesh& mesh, const State& st, const PhysicalParams& par);

// Semi-implicit Manning friction factor applied to both discharge components:
// (hu)' = (hu) / (1 + dt eta^2 g |u| h^{-4/3}).
double friction_factor(double h, double hu, double hv, double dt, double eta, double g);
void apply_friction(State& st, double dt, const PhysicalParams& par);

// Cell integral of h grad(Z), discretized over the three centroid
// sub-triangles with depths h_sub from a balance system so that a flat free
// surface at rest is preserved exactly. The system solve falls back to the
// cell-average depth when it is singular or produces non-positive depths.
struct BedSource {
    Vec2 integral;
    std::array<double, 3> h_sub{};
    bool fallback = false;
};
BedSource bed_source_cell(Vec2 p0, Vec2 p1, Vec2 p2, double h_i, double z_i,
                          const std::array<double, 3>& h_edge,
                          const std::array<double, 3>& h_nb,
                          const std::array<double, 3>& z_nb);

struct StepStats {
    long clamped_feet = 0;
    long lsm_fallbacks = 0;
    long source_fallbacks = 0;
};

struct SolverScratch {
    PredictorWorkspace pred;
    NodeValues nv;
    std::vector<EdgeGhost> ghosts;
    std::vector<Conserved> w_edge;
    std::vector<Flux3> flux;
    std::vector<double> h_new, hu_new, hv_new;
};

// One full predictor-corrector step of size dt: semi-implicit friction, ghost
// states, interface prediction, flux/source gather, explicit Coriolis.
// Advances st.t by dt. Throws SolverError on positivity or finiteness loss.
void step(const Mesh& mesh, const Bed& bed, const PhysicalParams& par,
          const std::vector<BoundaryCondition>& bc_by_tag, State& st, double dt,
          SolverScratch& ws, StepStats* stats = nullptr);

}  // namespace swe
