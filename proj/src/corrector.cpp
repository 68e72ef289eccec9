#include "swe/corrector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace swe {

namespace {

inline double side_speed(const State& st, int c, Vec2 n, double g) {
    const double h = st.h[c];
    if (!(h > 0.0)) {
        throw SolverError("compute_dt: non-positive depth " + std::to_string(h) + " in cell " +
                          std::to_string(c));
    }
    const double un = (st.hu[c] * n.x + st.hv[c] * n.y) / h;
    return std::abs(un) + std::sqrt(g * h);
}

}  // namespace

double compute_dt(const Mesh& mesh, const State& st, const PhysicalParams& par) {
    double best = std::numeric_limits<double>::infinity();
    const double sqrt2a = std::sqrt(2.0 * par.alpha);
    for (int e = 0; e < mesh.n_edges(); ++e) {
        const Edge& ed = mesh.edges[e];
        double s = side_speed(st, ed.left, ed.normal, par.g);
        if (ed.right >= 0) s = std::max(s, side_speed(st, ed.right, ed.normal, par.g));
        const double a_l = mesh.area[ed.left] / (ed.len * s);
        best = std::min(best, a_l);
        if (ed.right >= 0) best = std::min(best, mesh.area[ed.right] / (ed.len * s));
        if (par.alpha > 0.0) {
            best = std::min(best, a_l / sqrt2a);
            if (ed.right >= 0) {
                best = std::min(best, mesh.area[ed.right] / (ed.len * s) / sqrt2a);
            }
            best = std::min(best, ed.len / (s * par.alpha));
        }
    }
    return par.cfl * best;
}

double friction_factor(double h, double hu, double hv, double dt, double eta, double g) {
    if (eta <= 0.0) return 1.0;
    const double umag = std::sqrt(hu * hu + hv * hv) / h;
    return 1.0 / (1.0 + dt * eta * eta * g * umag / (h * std::cbrt(h)));
}

void apply_friction(State& st, double dt, const PhysicalParams& par) {
    if (par.eta <= 0.0) return;
    const int nc = static_cast<int>(st.h.size());
    for (int c = 0; c < nc; ++c) {
        const double f = friction_factor(st.h[c], st.hu[c], st.hv[c], dt, par.eta, par.g);
        st.hu[c] *= f;
        st.hv[c] *= f;
    }
}

BedSource bed_source_cell(Vec2 p0, Vec2 p1, Vec2 p2, double h_i, double z_i,
                          const std::array<double, 3>& h_edge,
                          const std::array<double, 3>& h_nb,
                          const std::array<double, 3>& z_nb) {
    // Locally flat bed: the momentum source h*grad(Z) vanishes identically, and
    // the reconstruction below must not manufacture one out of depth variations
    // (its reconstructed bed offsets would otherwise feed back into the flow).
    if (z_nb[0] == z_i && z_nb[1] == z_i && z_nb[2] == z_i) {
        BedSource out;
        out.h_sub = {h_i, h_i, h_i};
        return out;
    }
    const Vec2 p[3] = {p0, p1, p2};
    const Vec2 c = (1.0 / 3.0) * (p0 + p1 + p2);
    Vec2 N[3], nu[3];
    for (int k = 0; k < 3; ++k) {
        N[k] = perp(p[(k + 1) % 3] - p[k]);   // outer edge k = (v_k, v_{k+1})
        nu[k] = perp(c - p[(k + 1) % 3]);     // from sub-triangle k into k+1
    }

    // Balance system for the sub-triangle depths.
    const double r1 = 3.0 * h_i;
    double r2 = 0.0, r3 = 0.0;
    for (int k = 0; k < 3; ++k) {
        r2 += h_edge[k] * h_edge[k] * N[k].x;
        r3 += h_edge[k] * h_edge[k] * N[k].y;
    }
    const double m[3][3] = {{1.0, 1.0, 1.0},
                            {h_nb[0] * N[0].x, h_nb[1] * N[1].x, h_nb[2] * N[2].x},
                            {h_nb[0] * N[0].y, h_nb[1] * N[1].y, h_nb[2] * N[2].y}};
    // Adjugate solve with a conditioning guard.
    double adj[3][3];
    adj[0][0] = m[1][1] * m[2][2] - m[1][2] * m[2][1];
    adj[0][1] = m[0][2] * m[2][1] - m[0][1] * m[2][2];
    adj[0][2] = m[0][1] * m[1][2] - m[0][2] * m[1][1];
    adj[1][0] = m[1][2] * m[2][0] - m[1][0] * m[2][2];
    adj[1][1] = m[0][0] * m[2][2] - m[0][2] * m[2][0];
    adj[1][2] = m[0][2] * m[1][0] - m[0][0] * m[1][2];
    adj[2][0] = m[1][0] * m[2][1] - m[1][1] * m[2][0];
    adj[2][1] = m[0][1] * m[2][0] - m[0][0] * m[2][1];
    adj[2][2] = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    const double det = m[0][0] * adj[0][0] + m[0][1] * adj[1][0] + m[0][2] * adj[2][0];

    BedSource out;
    bool ok = std::abs(det) > 0.0;
    if (ok) {
        double norm_m = 0.0, norm_inv = 0.0;
        for (int i = 0; i < 3; ++i) {
            double rm = 0.0, ri = 0.0;
            for (int j = 0; j < 3; ++j) {
                rm += std::abs(m[i][j]);
                ri += std::abs(adj[i][j] / det);
            }
            norm_m = std::max(norm_m, rm);
            norm_inv = std::max(norm_inv, ri);
        }
        ok = std::isfinite(norm_inv) && norm_m * norm_inv < 1e12;
    }
    if (ok) {
        for (int k = 0; k < 3; ++k) {
            out.h_sub[k] =
                (adj[k][0] * r1 + adj[k][1] * r2 + adj[k][2] * r3) / det;
            if (!(out.h_sub[k] > 0.0) || !std::isfinite(out.h_sub[k])) ok = false;
        }
    }
    if (!ok) {
        out.h_sub = {h_i, h_i, h_i};
        out.fallback = true;
    }

    // Green-Gauss over the sub-triangles; the reconstructed bed keeps
    // h_sub + z_sub equal to the cell free surface.
    double z_sub[3];
    for (int k = 0; k < 3; ++k) z_sub[k] = z_i + (h_i - out.h_sub[k]);
    Vec2 I{0.0, 0.0};
    for (int k = 0; k < 3; ++k) {
        const int kp = (k + 1) % 3;
        const int km = (k + 2) % 3;
        Vec2 flux = 0.5 * (z_sub[k] + z_nb[k]) * N[k];
        flux = flux + 0.5 * (z_sub[k] + z_sub[kp]) * nu[k];
        flux = flux - 0.5 * (z_sub[k] + z_sub[km]) * nu[km];
        I = I + out.h_sub[k] * flux;
    }
    out.integral = I;
    return out;
}

void step(const Mesh& mesh, const Bed& bed, const PhysicalParams& par,
          const std::vector<BoundaryCondition>& bc_by_tag, State& st, double dt,
          SolverScratch& ws, StepStats* stats) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw SolverError("step: invalid time step " + std::to_string(dt));
    }
    const int nc = mesh.n_cells();
    const int ne = mesh.n_edges();

    apply_friction(st, dt, par);
    compute_node_values(mesh, st, bed, ws.nv);
    compute_ghosts(mesh, st, bed, bc_by_tag, par.g, st.t, ws.ghosts);

    PredictorStats ps;
    predict_interfaces(mesh, st, bed, ws.nv, ws.ghosts, bc_by_tag, par, dt, ws.pred, ws.w_edge,
                       &ps);

    ws.flux.resize(ne);
    for (int e = 0; e < ne; ++e) {
        const Edge& ed = mesh.edges[e];
        Flux3 f = normal_flux(ws.w_edge[e], ed.normal, par.g);
        for (int k = 0; k < 3; ++k) f[k] *= ed.len;
        ws.flux[e] = f;
    }

    ws.h_new.resize(nc);
    ws.hu_new.resize(nc);
    ws.hv_new.resize(nc);
    long source_fallbacks = 0;
    for (int c = 0; c < nc; ++c) {
        double sum0 = 0.0, sum1 = 0.0, sum2 = 0.0;
        std::array<double, 3> h_edge, h_nb, z_nb;
        for (int k = 0; k < 3; ++k) {
            const int e = mesh.cell_edges[c][k];
            const Edge& ed = mesh.edges[e];
            const double sgn = ed.left == c ? 1.0 : -1.0;
            sum0 += sgn * ws.flux[e][0];
            sum1 += sgn * ws.flux[e][1];
            sum2 += sgn * ws.flux[e][2];
            h_edge[k] = ws.w_edge[e].h;
            const int nb = mesh.cell_neighbors[c][k];
            if (nb >= 0) {
                h_nb[k] = st.h[nb];
                z_nb[k] = bed.z_cell[nb];
            } else {
                const EdgeGhost& g = ws.ghosts[ed.bidx];
                h_nb[k] = g.w.h;
                z_nb[k] = g.z;
            }
        }
        const auto& tri = mesh.tris[c];
        const BedSource bs =
            bed_source_cell(mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]],
                            st.h[c], bed.z_cell[c], h_edge, h_nb, z_nb);
        if (bs.fallback) ++source_fallbacks;

        const double r = dt / mesh.area[c];
        const double hn = st.h[c] - r * sum0;
        const double hun = st.hu[c] - r * (sum1 + par.g * bs.integral.x) + dt * par.f_c * st.hv[c];
        const double hvn = st.hv[c] - r * (sum2 + par.g * bs.integral.y) - dt * par.f_c * st.hu[c];
        if (!std::isfinite(hn) || !std::isfinite(hun) || !std::isfinite(hvn)) {
            std::ostringstream os;
            os << "corrector: non-finite state in cell " << c << " at t=" << st.t + dt;
            throw SolverError(os.str());
        }
        if (!(hn > par.h_min)) {
            std::ostringstream os;
            os << "corrector: depth " << hn << " fell below the positivity floor in cell " << c
               << " near (" << mesh.centroid[c].x << ", " << mesh.centroid[c].y
               << ") at t=" << st.t + dt;
            throw SolverError(os.str());
        }
        ws.h_new[c] = hn;
        ws.hu_new[c] = hun;
        ws.hv_new[c] = hvn;
    }

    st.h.swap(ws.h_new);
    st.hu.swap(ws.hu_new);
    st.hv.swap(ws.hv_new);
    st.t += dt;
    if (stats) {
        stats->clamped_feet += ps.clamped_feet;
        stats->lsm_fallbacks += ps.lsm_fallbacks;
        stats->source_fallbacks += source_fallbacks;
    }
}

}  // namespace swe
