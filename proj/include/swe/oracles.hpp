#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "swe/boundary.hpp"
#include "swe/mesh.hpp"
#include "swe/model.hpp"

namespace swe {

// Wet-bed dam-break reference solution: left state, rarefaction fan, constant
// middle state, shock moving at v_c.
struct StokerSolution {
    double h_l = 0.0, h_r = 0.0, g = 9.81, x_m = 0.0;
    double c_m = 0.0, h_m = 0.0, u_m = 0.0, v_c = 0.0;
};

// Middle state by bisection of the two-wave matching condition
// 8 c_m^2 c_r^2 (c_l - c_m)^2 = (c_m^2 - c_r^2)^2 (c_m^2 + c_r^2).
StokerSolution stoker_middle_state(double h_l, double h_r, double g, double x_m = 0.0);

// (h, u) at position x and time t.
std::array<double, 2> stoker_exact(double t, double x, const StokerSolution& s);

// Travelling-vortex exact solution of the flat-bed frictionless system.
struct VortexParams {
    double M = 0.5;
    double a = 0.04;
    double b = 0.02;
    double theta = 0.0;  // set via preset; pi/6 in the accuracy benchmark
    double x0 = -20.0;
    double y0 = -10.0;
    double g = 1.0;
};
std::array<double, 3> vortex_exact(double t, double x, double y, const VortexParams& p);

// Quasi-stationary tidal solution over a bed of elevation z at position x.
std::array<double, 2> tidal_exact(double t, double x, double h0, double z);

// Piecewise-linear irregular bed profile on [0, 1500].
double irregular_bed(double x);

// sum(|T_i| |num_i - ex_i|) / sum(|T_i| |ex_i|).
double relative_l1_error(const Mesh& mesh, const std::vector<double>& numeric,
                         const std::vector<double>& exact);
double linf_error(const std::vector<double>& numeric, const std::vector<double>& exact);

// A fully-specified benchmark case: mesh recipe, bed, initial state, boundary
// bindings, parameters, end time, and (when known) the exact solution handle
// returning (h, u, v) at (t, position).
struct CasePreset {
    std::string name;
    std::string description;
    MeshRecipe mesh;
    std::function<double(Vec2)> bed;          // empty -> flat bed
    std::function<Conserved(Vec2)> initial;
    std::map<std::string, BoundaryCondition> bcs;
    PhysicalParams params;
    double t_end = 1.0;
    std::function<std::array<double, 3>(double, Vec2)> exact;
};

CasePreset preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace swe
