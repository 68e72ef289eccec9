#include "swe/model.hpp"

#include <cmath>
#include <string>

namespace swe {

namespace {

void require_positive_depth(double h, const char* where) {
    if (!(h > 0.0)) {
        throw SolverError(std::string(where) + ": non-positive depth h=" + std::to_string(h));
    }
}

}  // namespace

void PhysicalParams::validate() const {
    if (!(g > 0.0)) throw ConfigError("params: g must be positive");
    if (!(cfl > 0.0) || cfl > 1.0) throw ConfigError("params: cfl must lie in (0,1]");
    if (!(alpha >= 0.0)) throw ConfigError("params: alpha must be >= 0");
    if (!(h_min > 0.0)) throw ConfigError("params: h_min must be positive");
    if (!(eta >= 0.0)) throw ConfigError("params: eta must be >= 0");
    if (!std::isfinite(f_c)) throw ConfigError("params: f_c must be finite");
}

FluxPair physical_flux(const Conserved& w, double g) {
    require_positive_depth(w.h, "physical_flux");
    const double u = w.hu / w.h;
    const double v = w.hv / w.h;
    const double p = 0.5 * g * w.h * w.h;
    return {{w.hu, w.hu * u + p, w.hu * v}, {w.hv, w.hv * u, w.hv * v + p}};
}

Flux3 normal_flux(const Conserved& w, Vec2 n, double g) {
    require_positive_depth(w.h, "normal_flux");
    const double u = w.hu / w.h;
    const double v = w.hv / w.h;
    const double un = u * n.x + v * n.y;
    const double p = 0.5 * g * w.h * w.h;
    return {w.h * un, w.hu * un + p * n.x, w.hv * un + p * n.y};
}

std::array<double, 3> wave_speeds(const Conserved& w, Vec2 a, double g) {
    require_positive_depth(w.h, "wave_speeds");
    const double ua = (w.hu * a.x + w.hv * a.y) / w.h;
    const double c = norm(a) * std::sqrt(g * w.h);
    return {ua - c, ua, ua + c};
}

double froude(const Conserved& w, Vec2 n, double g) {
    require_positive_depth(w.h, "froude");
    const double un = (w.hu * n.x + w.hv * n.y) / w.h;
    return std::abs(un) / std::sqrt(g * w.h);
}

Projected rotate_to_edge(const Conserved& w, Vec2 n) {
    return {w.h, w.hu * n.x + w.hv * n.y, w.hv * n.x - w.hu * n.y};
}

Conserved rotate_from_edge(const Projected& p, Vec2 n) {
    return {p.h, p.hun * n.x - p.hut * n.y, p.hut * n.x + p.hun * n.y};
}

double energy(const Conserved& w, double z, double g) {
    require_positive_depth(w.h, "energy");
    const double u = w.hu / w.h;
    const double v = w.hv / w.h;
    return 0.5 * w.h * (u * u + v * v) + 0.5 * g * w.h * w.h + g * w.h * z;
}

}  // namespace swe
