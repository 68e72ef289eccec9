#include "swe/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace swe {

namespace {

inline double safe_inv_h(double h, double h_min) { return 1.0 / std::max(h, h_min); }

// Values carried by a stencil member.
inline void member_values(const Mesh& mesh, const State& st, const NodeValues& nv,
                          const std::vector<EdgeGhost>* ghosts, StencilMember m, double& h,
                          double& hu, double& hv) {
    switch (m.kind) {
        case MemberKind::Cell:
            h = st.h[m.id];
            hu = st.hu[m.id];
            hv = st.hv[m.id];
            return;
        case MemberKind::Node:
            h = nv.h[m.id];
            hu = nv.hu[m.id];
            hv = nv.hv[m.id];
            return;
        default: {
            const EdgeGhost& g = (*ghosts)[mesh.edges[m.id].bidx];
            h = g.w.h;
            hu = g.w.hu;
            hv = g.w.hv;
            return;
        }
    }
}

// u.n interpolated at X from the stencil of `cell` (used along trajectories).
double speed_at(const Mesh& mesh, const State& st, const NodeValues& nv, int cell, Vec2 X,
                Vec2 n, double h_min, PredictorWorkspace& ws) {
    const int b = mesh.cell_sten_ptr[cell];
    const int e = mesh.cell_sten_ptr[cell + 1];
    const int m = e - b;
    for (int i = 0; i < m; ++i) {
        const StencilMember sm = mesh.cell_sten[b + i];
        ws.pos[i] = mesh.member_pos(sm);
        member_values(mesh, st, nv, nullptr, sm, ws.val_h[i], ws.val_hu[i], ws.val_hv[i]);
    }
    lsm_weights(ws.pos.data(), m, X, ws.wbuf.data());
    double H = 0.0, HU = 0.0, HV = 0.0;
    for (int i = 0; i < m; ++i) {
        H += ws.wbuf[i] * ws.val_h[i];
        HU += ws.wbuf[i] * ws.val_hu[i];
        HV += ws.wbuf[i] * ws.val_hv[i];
    }
    return (HU * n.x + HV * n.y) * safe_inv_h(H, h_min);
}

struct RayEnd {
    Vec2 pos;          // final point: origin + t * disp
    double t = 1.0;    // fraction of disp actually travelled
    int cell = -1;     // cell containing pos
    int wall = -1;     // boundary edge that stopped the ray, -1 if none
};

// Walk the segment origin -> origin + disp across edge-adjacent cells starting
// from cell0 (origin inside it or on its boundary); stop at the first wall.
RayEnd trace_ray(const Mesh& mesh, Vec2 origin, Vec2 disp, int cell0) {
    RayEnd r;
    r.cell = cell0;
    r.pos = origin + disp;
    double t = 0.0;
    int entered_through = -1;
    for (int it = 0; it < 256; ++it) {
        double t_exit = std::numeric_limits<double>::infinity();
        int k_exit = -1;
        for (int k = 0; k < 3; ++k) {
            const int e = mesh.cell_edges[r.cell][k];
            if (e == entered_through) continue;
            const Edge& ed = mesh.edges[e];
            const Vec2 n_out = ed.left == r.cell ? ed.normal : -1.0 * ed.normal;
            const double den = disp.x * n_out.x + disp.y * n_out.y;
            if (den <= 0.0) continue;  // moving inward or parallel
            const Vec2 a = mesh.nodes[ed.n0];
            const double th = ((a.x - origin.x) * n_out.x + (a.y - origin.y) * n_out.y) / den;
            if (th < t - 1e-12 * std::abs(t)) continue;
            if (th < t_exit) {
                t_exit = th;
                k_exit = k;
            }
        }
        if (k_exit < 0 || t_exit >= 1.0) return r;  // endpoint lies in this cell
        const int nb = mesh.cell_neighbors[r.cell][k_exit];
        if (nb < 0) {
            r.wall = mesh.cell_edges[r.cell][k_exit];
            r.t = std::clamp(t_exit, 0.0, 1.0);
            r.pos = origin + r.t * disp;
            return r;
        }
        t = std::max(t, t_exit);
        entered_through = mesh.cell_edges[r.cell][k_exit];
        r.cell = nb;
    }
    // pathological walk (degenerate geometry): clamp where we are
    r.t = std::clamp(t, 0.0, 1.0);
    r.pos = origin + r.t * disp;
    return r;
}

}  // namespace

LsmWeights lsm_weights(const Vec2* pts, int n, Vec2 at, double* w) {
    if (n <= 0) throw SolverError("lsm_weights: empty stencil");
    LsmWeights res;
    res.n = n;
    double scale = 0.0;
    for (int i = 0; i < n; ++i) {
        scale = std::max({scale, std::abs(pts[i].x - at.x), std::abs(pts[i].y - at.y)});
    }
    if (scale == 0.0) {  // every sample sits at the evaluation point
        std::fill(w, w + n, 1.0 / n);
        return res;
    }
    const double inv = 1.0 / scale;
    double rx = 0.0, ry = 0.0, ixx = 0.0, iyy = 0.0, ixy = 0.0;
    for (int i = 0; i < n; ++i) {
        const double dx = (pts[i].x - at.x) * inv;
        const double dy = (pts[i].y - at.y) * inv;
        rx += dx;
        ry += dy;
        ixx += dx * dx;
        iyy += dy * dy;
        ixy += dx * dy;
    }
    const double det = ixx * iyy - ixy * ixy;
    bool ok = n >= 3 && det > 1e-10 * (ixx + iyy) * (ixx + iyy);
    double lx = 0.0, ly = 0.0, denom = static_cast<double>(n);
    if (ok) {
        lx = (ixy * ry - iyy * rx) / det;
        ly = (ixy * rx - ixx * ry) / det;
        denom = n + lx * rx + ly * ry;
        ok = std::isfinite(denom) && std::abs(denom) > 1e-8;
    }
    if (!ok) {
        std::fill(w, w + n, 1.0 / n);
        res.degenerate = true;
        return res;
    }
    for (int i = 0; i < n; ++i) {
        const double dx = (pts[i].x - at.x) * inv;
        const double dy = (pts[i].y - at.y) * inv;
        w[i] = (1.0 + lx * dx + ly * dy) / denom;
    }
    return res;
}

std::vector<double> lsm_weights(const std::vector<Vec2>& pts, Vec2 at, bool* degenerate) {
    std::vector<double> w(pts.size());
    const LsmWeights r = lsm_weights(pts.data(), static_cast<int>(pts.size()), at, w.data());
    if (degenerate) *degenerate = r.degenerate;
    return w;
}

Vec2 diamond_gradient(double u_s, double u_n, double u_l, double u_r, Vec2 S, Vec2 N, Vec2 L,
                      Vec2 R) {
    const double two_mu = cross(R - L, N - S);
    if (!(std::abs(two_mu) > 1e-300)) throw SolverError("diamond_gradient: degenerate diamond");
    const Vec2 g = (u_s - u_n) * perp(R - L) + (u_r - u_l) * perp(N - S);
    return (1.0 / two_mu) * g;
}

double vertex_value(const Mesh& mesh, const double* cell_field, int v) {
    double s = 0.0;
    for (int k = mesh.vert_ptr[v]; k < mesh.vert_ptr[v + 1]; ++k) {
        s += mesh.vert_w[k] * cell_field[mesh.vert_cell[k]];
    }
    return s;
}

void compute_node_values(const Mesh& mesh, const State& st, const Bed& bed, NodeValues& nv) {
    const int nn = mesh.n_nodes();
    nv.surf.resize(nn);
    nv.h.resize(nn);
    nv.hu.resize(nn);
    nv.hv.resize(nn);
    for (int v = 0; v < nn; ++v) {
        double s = 0.0, hu = 0.0, hv = 0.0;
        for (int k = mesh.vert_ptr[v]; k < mesh.vert_ptr[v + 1]; ++k) {
            const int c = mesh.vert_cell[k];
            const double w = mesh.vert_w[k];
            s += w * (st.h[c] + bed.z_cell[c]);
            hu += w * st.hu[c];
            hv += w * st.hv[c];
        }
        nv.surf[v] = s;
        nv.h[v] = s - bed.z_node[v];
        nv.hu[v] = hu;
        nv.hv[v] = hv;
    }
}

void compute_ghosts(const Mesh& mesh, const State& st, const Bed& bed,
                    const std::vector<BoundaryCondition>& bc_by_tag, double g, double t,
                    std::vector<EdgeGhost>& out) {
    out.resize(mesh.boundary_edges.size());
    for (size_t i = 0; i < mesh.boundary_edges.size(); ++i) {
        const Edge& ed = mesh.edges[mesh.boundary_edges[i]];
        if (ed.tag < 0 || ed.tag >= static_cast<int>(bc_by_tag.size())) {
            throw ConfigError("no boundary condition bound to tag '" +
                              (ed.tag >= 0 && ed.tag < static_cast<int>(mesh.tag_names.size())
                                   ? mesh.tag_names[ed.tag]
                                   : std::string("?")) +
                              "'");
        }
        const Conserved wl{st.h[ed.left], st.hu[ed.left], st.hv[ed.left]};
        out[i].w = ghost_state(bc_by_tag[ed.tag], wl, ed.normal, t, g, ed.rpos);
        out[i].z = bed.z_cell[ed.left];
    }
}

void PredictorWorkspace::bind(const Mesh& m) {
    mesh = &m;
    int max_row = 4;
    for (int e = 0; e < m.n_edges(); ++e) {
        max_row = std::max(max_row, m.sten_ptr[e + 1] - m.sten_ptr[e]);
    }
    for (int c = 0; c < m.n_cells(); ++c) {
        max_row = std::max(max_row, m.cell_sten_ptr[c + 1] - m.cell_sten_ptr[c]);
    }
    max_row += 1;  // room for an appended ghost member
    pos.resize(max_row);
    val_h.resize(max_row);
    val_hu.resize(max_row);
    val_hv.resize(max_row);
    val_z.resize(max_row);
    wbuf.resize(max_row);
    w_mid.assign(m.sten.size(), 0.0);
    for (int e = 0; e < m.n_edges(); ++e) {
        const int b = m.sten_ptr[e];
        const int n = m.sten_ptr[e + 1] - b;
        for (int i = 0; i < n; ++i) pos[i] = m.member_pos(m.sten[b + i]);
        lsm_weights(pos.data(), n, m.edges[e].mid, w_mid.data() + b);
    }
}

Departure backtrack_departure(const Mesh& mesh, const State& st, const NodeValues& nv,
                              int edge, double sigma, double h_min, PredictorWorkspace& ws) {
    const Edge& ed = mesh.edges[edge];
    Departure dep;
    dep.foot = ed.mid;
    if (sigma == 0.0) return dep;

    // Stage 1 at the midpoint itself, using the precomputed weights.
    const int b = mesh.sten_ptr[edge];
    const int n = mesh.sten_ptr[edge + 1] - b;
    double H = 0.0, HU = 0.0, HV = 0.0;
    for (int i = 0; i < n; ++i) {
        double h, hu, hv;
        member_values(mesh, st, nv, nullptr, mesh.sten[b + i], h, hu, hv);
        H += ws.w_mid[b + i] * h;
        HU += ws.w_mid[b + i] * hu;
        HV += ws.w_mid[b + i] * hv;
    }
    const double k1 = (HU * ed.normal.x + HV * ed.normal.y) * safe_inv_h(H, h_min);
    if (k1 == 0.0) return dep;  // still water: the trajectory stays put

    auto eval = [&](double s) -> double {
        const RayEnd r = trace_ray(mesh, ed.mid, -s * ed.normal, ed.left);
        return speed_at(mesh, st, nv, r.cell, r.pos, ed.normal, h_min, ws);
    };
    const double k2 = eval(0.5 * sigma * k1);
    const double k3 = eval(sigma * (-k1 + 2.0 * k2));
    dep.s = sigma * (k1 + 4.0 * k2 + k3) / 6.0;
    if (dep.s == 0.0) return dep;

    const RayEnd r = trace_ray(mesh, ed.mid, -dep.s * ed.normal, ed.left);
    dep.foot = r.pos;
    dep.cell = r.cell;
    if (r.wall >= 0) {
        dep.s *= r.t;
        dep.clamped = true;
        dep.ghost_edge = r.wall;
    }
    return dep;
}

FootState interpolate_foot(const Mesh& mesh, const State& st, const NodeValues& nv,
                           const std::vector<EdgeGhost>& ghosts, int edge, Vec2 at,
                           int ghost_edge, double h_min, PredictorWorkspace& ws) {
    const int b = mesh.sten_ptr[edge];
    int n = mesh.sten_ptr[edge + 1] - b;
    for (int i = 0; i < n; ++i) {
        const StencilMember sm = mesh.sten[b + i];
        ws.pos[i] = mesh.member_pos(sm);
        member_values(mesh, st, nv, &ghosts, sm, ws.val_h[i], ws.val_hu[i], ws.val_hv[i]);
    }
    if (ghost_edge >= 0) {
        const StencilMember sm{MemberKind::Ghost, ghost_edge};
        ws.pos[n] = mesh.member_pos(sm);
        member_values(mesh, st, nv, &ghosts, sm, ws.val_h[n], ws.val_hu[n], ws.val_hv[n]);
        ++n;
    }
    const LsmWeights lw = lsm_weights(ws.pos.data(), n, at, ws.wbuf.data());
    FootState f;
    f.fallback = lw.degenerate;
    for (int i = 0; i < n; ++i) {
        f.h += ws.wbuf[i] * ws.val_h[i];
        f.hu += ws.wbuf[i] * ws.val_hu[i];
        f.hv += ws.wbuf[i] * ws.val_hv[i];
    }
    if (!(f.h > h_min)) {
        std::ostringstream os;
        os << "predictor: non-positive interpolated depth " << f.h << " at edge " << edge
           << " near (" << at.x << ", " << at.y << ")";
        throw SolverError(os.str());
    }
    return f;
}

void predict_interfaces(const Mesh& mesh, const State& st, const Bed& bed,
                        const NodeValues& nv, const std::vector<EdgeGhost>& ghosts,
                        const std::vector<BoundaryCondition>& bc_by_tag,
                        const PhysicalParams& par, double dt, PredictorWorkspace& ws,
                        std::vector<Conserved>& w_edge, PredictorStats* stats) {
    if (ws.mesh != &mesh || ws.w_mid.size() != mesh.sten.size()) ws.bind(mesh);
    const int ne = mesh.n_edges();
    w_edge.resize(ne);
    const double coef = par.alpha * dt;

    for (int e = 0; e < ne; ++e) {
        const Edge& ed = mesh.edges[e];
        const int l = ed.left;
        const double nx = ed.normal.x, ny = ed.normal.y;

        // Diamond directional derivatives of the free surface and of u.n.
        const double hL = st.h[l];
        const double invL = safe_inv_h(hL, par.h_min);
        const double sL = hL + bed.z_cell[l];
        const double phiL = (st.hu[l] * nx + st.hv[l] * ny) * invL;
        double sR, phiR;
        if (ed.right >= 0) {
            const int r = ed.right;
            const double invR = safe_inv_h(st.h[r], par.h_min);
            sR = st.h[r] + bed.z_cell[r];
            phiR = (st.hu[r] * nx + st.hv[r] * ny) * invR;
        } else {
            const EdgeGhost& g = ghosts[ed.bidx];
            const double invR = safe_inv_h(g.w.h, par.h_min);
            sR = g.w.h + g.z;
            phiR = (g.w.hu * nx + g.w.hv * ny) * invR;
        }
        const double sS = nv.surf[ed.n0];
        const double sN = nv.surf[ed.n1];
        const double invS = safe_inv_h(nv.h[ed.n0], par.h_min);
        const double invN = safe_inv_h(nv.h[ed.n1], par.h_min);
        const double phiS = (nv.hu[ed.n0] * nx + nv.hv[ed.n0] * ny) * invS;
        const double phiN = (nv.hu[ed.n1] * nx + nv.hv[ed.n1] * ny) * invN;
        const double arl = ed.d_rl.x * nx + ed.d_rl.y * ny;  // d_ns.n = len
        const double Ds = ed.inv2mu * ((sS - sN) * arl + (sR - sL) * ed.len);
        const double Du = ed.inv2mu * ((phiS - phiN) * arl + (phiR - phiL) * ed.len);

        // Departure point and field values there.
        const Departure dep = backtrack_departure(mesh, st, nv, e, coef, par.h_min, ws);
        FootState f;
        if (!dep.clamped && dep.s == 0.0) {
            const int b = mesh.sten_ptr[e];
            const int n = mesh.sten_ptr[e + 1] - b;
            for (int i = 0; i < n; ++i) {
                double h, hu, hv;
                member_values(mesh, st, nv, nullptr, mesh.sten[b + i], h, hu, hv);
                f.h += ws.w_mid[b + i] * h;
                f.hu += ws.w_mid[b + i] * hu;
                f.hv += ws.w_mid[b + i] * hv;
            }
            if (!(f.h > par.h_min)) {
                std::ostringstream os;
                os << "predictor: non-positive interpolated depth " << f.h << " at edge " << e
                   << " near (" << ed.mid.x << ", " << ed.mid.y << ") at t=" << st.t;
                throw SolverError(os.str());
            }
        } else {
            if (stats && dep.clamped) ++stats->clamped_feet;
            f = interpolate_foot(mesh, st, nv, ghosts, e, dep.foot, dep.ghost_edge, par.h_min,
                                 ws);
            if (stats && f.fallback) ++stats->lsm_fallbacks;
        }

        // Advance the trace along the characteristic.
        const double inv_fh = 1.0 / f.h;
        const double hun = f.hu * nx + f.hv * ny;
        const double hut = f.hv * nx - f.hu * ny;
        double fric = 0.0;
        if (par.eta > 0.0) {
            const double umag = std::sqrt(f.hu * f.hu + f.hv * f.hv) * inv_fh;
            fric = par.eta * par.eta * par.g * umag / (f.h * std::cbrt(f.h));
        }
        Projected tr;
        tr.h = f.h - coef * f.h * Du;
        tr.hun = hun - coef * (par.g * f.h * Ds - par.f_c * hut + hun * Du + fric * hun);
        tr.hut = hut - coef * (par.f_c * hun + hut * Du + fric * hut);
        if (!(tr.h > par.h_min) || !std::isfinite(tr.h)) {
            std::ostringstream os;
            os << "predictor: non-positive interface depth " << tr.h << " at edge " << e
               << " near (" << ed.mid.x << ", " << ed.mid.y << ") at t=" << st.t;
            throw SolverError(os.str());
        }

        if (ed.right < 0) {
            if (ed.tag < 0 || ed.tag >= static_cast<int>(bc_by_tag.size())) {
                throw ConfigError("no boundary condition bound to tag id " +
                                  std::to_string(ed.tag));
            }
            const BoundaryCondition& bc = bc_by_tag[ed.tag];
            if (bc.kind == BcKind::Injection) {
                if (!bc.inject) throw ConfigError("injection boundary without a state function");
                w_edge[e] = bc.inject(st.t, ed.mid);
                if (!(w_edge[e].h > 0.0)) {
                    throw SolverError("injection boundary produced non-positive depth at edge " +
                                      std::to_string(e));
                }
            } else {
                const double inv_trh = 1.0 / tr.h;
                const std::array<double, 3> gp =
                    ghost_primitive(bc, tr.h, tr.hun * inv_trh, tr.hut * inv_trh, st.t, par.g);
                w_edge[e] =
                    rotate_from_edge({gp[0], gp[0] * gp[1], gp[0] * gp[2]}, ed.normal);
            }
        } else {
            w_edge[e] = rotate_from_edge(tr, ed.normal);
        }
    }
}

}  // namespace swe
