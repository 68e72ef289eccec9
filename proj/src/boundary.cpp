#include "swe/boundary.hpp"

#include <cmath>

namespace swe {

FlowRegime classify_regime(double un, double h, double g) {
    if (!(h > 0.0)) throw SolverError("classify_regime: non-positive depth");
    const bool super = std::abs(un) / std::sqrt(g * h) >= 1.0;
    const bool out = un >= 0.0;
    if (super) return out ? FlowRegime::SupercriticalOutflow : FlowRegime::SupercriticalInflow;
    return out ? FlowRegime::SubcriticalOutflow : FlowRegime::SubcriticalInflow;
}

std::array<double, 3> ghost_primitive(const BoundaryCondition& bc, double h_l, double u_l,
                                      double v_l, double t, double g) {
    switch (bc.kind) {
        case BcKind::SlipWall:
            return {h_l, 0.0, v_l};
        case BcKind::NoSlipWall:
            return {h_l, 0.0, 0.0};
        case BcKind::Neumann:
            return {h_l, u_l, v_l};
        case BcKind::Injection:
            throw ConfigError("injection boundary requires a position; use ghost_state");
        case BcKind::FluidInOut:
            break;
    }
    const double hb = bc.h_b_of_t ? bc.h_b_of_t(t) : bc.h_b;
    const double ub = bc.u_b_of_t ? bc.u_b_of_t(t) : bc.u_b;
    FlowRegime regime = classify_regime(u_l, h_l, g);
    if (bc.mode == FluidMode::ForceSubcritical) {
        regime = u_l >= 0.0 ? FlowRegime::SubcriticalOutflow : FlowRegime::SubcriticalInflow;
    } else if (bc.mode == FluidMode::ForceSupercritical) {
        regime = u_l >= 0.0 ? FlowRegime::SupercriticalOutflow : FlowRegime::SupercriticalInflow;
    }
    switch (regime) {
        case FlowRegime::SubcriticalInflow:
            if (!(hb > 0.0)) throw ConfigError("fluid boundary: subcritical inflow needs h_b > 0");
            return {hb, u_l + std::sqrt(g) * (std::sqrt(h_l) - std::sqrt(hb)), 0.0};
        case FlowRegime::SubcriticalOutflow:
            if (!(hb > 0.0)) throw ConfigError("fluid boundary: subcritical outflow needs h_b > 0");
            return {hb, u_l + std::sqrt(g) * (std::sqrt(h_l) - std::sqrt(hb)), v_l};
        case FlowRegime::SupercriticalInflow:
            if (!(hb > 0.0)) throw ConfigError("fluid boundary: supercritical inflow needs h_b > 0");
            return {hb, ub, 0.0};
        case FlowRegime::SupercriticalOutflow:
        default:
            return {h_l, u_l, v_l};
    }
}

Conserved ghost_state(const BoundaryCondition& bc, const Conserved& w_l, Vec2 n, double t,
                      double g, Vec2 pos) {
    if (bc.kind == BcKind::Injection) {
        if (!bc.inject) throw ConfigError("injection boundary has no state function");
        return bc.inject(t, pos);
    }
    if (!(w_l.h > 0.0)) throw SolverError("ghost_state: non-positive interior depth");
    const Projected p = rotate_to_edge(w_l, n);
    const auto [hr, ur, vr] = ghost_primitive(bc, p.h, p.hun / p.h, p.hut / p.h, t, g);
    return rotate_from_edge({hr, hr * ur, hr * vr}, n);
}

}  // namespace swe
