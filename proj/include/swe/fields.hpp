#pragma once

#include <functional>
#include <vector>

#include "swe/mesh.hpp"
#include "swe/model.hpp"

namespace swe {

// Cell-averaged conserved fields.
struct State {
    std::vector<double> h, hu, hv;
    double t = 0.0;
};

// Bottom elevation at cell centroids and (sampled) at mesh nodes.
struct Bed {
    std::vector<double> z_cell, z_node;
};

inline Bed make_bed(const Mesh& mesh, const std::function<double(Vec2)>& z) {
    Bed b;
    b.z_cell.resize(mesh.n_cells());
    b.z_node.resize(mesh.n_nodes());
    for (int c = 0; c < mesh.n_cells(); ++c) b.z_cell[c] = z ? z(mesh.centroid[c]) : 0.0;
    for (int v = 0; v < mesh.n_nodes(); ++v) b.z_node[v] = z ? z(mesh.nodes[v]) : 0.0;
    return b;
}

inline State make_state(const Mesh& mesh, const std::function<Conserved(Vec2)>& w0) {
    State s;
    s.h.resize(mesh.n_cells());
    s.hu.resize(mesh.n_cells());
    s.hv.resize(mesh.n_cells());
    for (int c = 0; c < mesh.n_cells(); ++c) {
        const Conserved w = w0(mesh.centroid[c]);
        s.h[c] = w.h;
        s.hu[c] = w.hu;
        s.hv[c] = w.hv;
    }
    return s;
}

}  // namespace swe
