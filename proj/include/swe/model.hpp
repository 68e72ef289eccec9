#pragma once

#include <array>

#include "swe/core.hpp"

namespace swe {

// Conserved state W = (h, hu, hv) in the global frame.
struct Conserved {
    double h = 0.0;
    double hu = 0.0;
    double hv = 0.0;
};

// State projected onto an edge frame: hun = normal discharge, hut = tangential.
struct Projected {
    double h = 0.0;
    double hun = 0.0;
    double hut = 0.0;
};

using Flux3 = std::array<double, 3>;

struct FluxPair {
    Flux3 fx;
    Flux3 fy;
};

// Physical and scheme parameters shared by predictor and corrector.
struct PhysicalParams {
    double g = 9.81;       // gravity (m/s^2)
    double f_c = 0.0;      // Coriolis parameter (1/s)
    double eta = 0.0;      // Manning roughness (s/m^{1/3})
    double cfl = 0.9;      // dt safety factor in (0,1]
    double alpha = 2.0;    // predictor time-offset factor, >= 0
    double h_min = 1e-8;   // positivity floor (m)

    void validate() const;
};

// ---- pointwise model operations ----

// F(W) and G(W) columns of the flux tensor.
FluxPair physical_flux(const Conserved& w, double g);

// F(W) nx + G(W) ny for a unit normal n.
Flux3 normal_flux(const Conserved& w, Vec2 n, double g);

// Characteristic speeds along direction a (not necessarily unit), ascending:
// { u.a - |a| c, u.a, u.a + |a| c } with c = sqrt(g h).
std::array<double, 3> wave_speeds(const Conserved& w, Vec2 a, double g);

// |u.n| / sqrt(g h) for a unit normal n.
double froude(const Conserved& w, Vec2 n, double g);

Projected rotate_to_edge(const Conserved& w, Vec2 n);
Conserved rotate_from_edge(const Projected& p, Vec2 n);

// Depth-integrated mechanical energy density h|u|^2/2 + g h^2/2 + g h z.
double energy(const Conserved& w, double z, double g);

}  // namespace swe
