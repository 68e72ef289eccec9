#pragma once

#include <array>
#include <functional>

#include "swe/core.hpp"
#include "swe/model.hpp"

namespace swe {

enum class BcKind { SlipWall, NoSlipWall, FluidInOut, Neumann, Injection };

enum class FlowRegime {
    SubcriticalInflow,
    SubcriticalOutflow,
    SupercriticalInflow,
    SupercriticalOutflow,
};

enum class FluidMode { Auto, ForceSubcritical, ForceSupercritical };

struct BoundaryCondition {
    BcKind kind = BcKind::Neumann;
    double h_b = 0.0;  // prescribed depth (FluidInOut)
    double u_b = 0.0;  // prescribed normal velocity (supercritical inflow)
    FluidMode mode = FluidMode::Auto;
    std::function<double(double)> h_b_of_t;  // optional time-dependent overrides
    std::function<double(double)> u_b_of_t;
    std::function<Conserved(double, Vec2)> inject;  // Injection: exact state (t, x)
};

// Regime from the interior trace: un = u.n (outflow when un >= 0),
// supercritical when |un|/sqrt(gh) >= 1.
FlowRegime classify_regime(double un, double h, double g);

// Ghost state in edge-local primitives (h, normal velocity, tangential
// velocity) given the interior trace in the same frame. Injection kinds are
// position-dependent and must go through ghost_state instead.
std::array<double, 3> ghost_primitive(const BoundaryCondition& bc, double h_l, double u_l,
                                      double v_l, double t, double g);

// Ghost state in the global frame for a boundary edge with outward unit
// normal n; pos is the evaluation position (used by Injection).
Conserved ghost_state(const BoundaryCondition& bc, const Conserved& w_l, Vec2 n, double t,
                      double g, Vec2 pos);

}  // namespace swe
