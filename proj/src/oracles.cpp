#include "swe/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace swe {

namespace {

constexpr double k_pi = std::numbers::pi;

double stoker_condition(double c, double c_l, double c_r) {
    const double d = c * c - c_r * c_r;
    return 8.0 * c * c * c_r * c_r * (c_l - c) * (c_l - c) - d * d * (c * c + c_r * c_r);
}

}  // namespace

StokerSolution stoker_middle_state(double h_l, double h_r, double g, double x_m) {
    if (!(g > 0.0)) throw Error("stoker_middle_state: g must be positive");
    if (!(h_r > 0.0) || !(h_l > 0.0) || h_r > h_l) {
        throw Error("stoker_middle_state: requires 0 < h_r <= h_l");
    }
    StokerSolution s;
    s.h_l = h_l;
    s.h_r = h_r;
    s.g = g;
    s.x_m = x_m;
    const double c_l = std::sqrt(g * h_l);
    const double c_r = std::sqrt(g * h_r);
    if (h_l == h_r) {  // no wave
        s.c_m = c_l;
        s.h_m = h_l;
        s.u_m = 0.0;
        s.v_c = c_r;
        return s;
    }
    double lo = c_r, hi = c_l;
    if (!(stoker_condition(lo, c_l, c_r) > 0.0) || !(stoker_condition(hi, c_l, c_r) < 0.0)) {
        throw Error("stoker_middle_state: middle-state equation does not bracket a root");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-16 * c_l; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (stoker_condition(mid, c_l, c_r) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    s.c_m = 0.5 * (lo + hi);
    s.h_m = s.c_m * s.c_m / g;
    s.u_m = 2.0 * (c_l - s.c_m);
    s.v_c = 2.0 * s.c_m * s.c_m * (c_l - s.c_m) / (s.c_m * s.c_m - g * h_r);
    return s;
}

std::array<double, 2> stoker_exact(double t, double x, const StokerSolution& s) {
    if (t <= 0.0) {
        return x <= s.x_m ? std::array<double, 2>{s.h_l, 0.0}
                          : std::array<double, 2>{s.h_r, 0.0};
    }
    const double c_l = std::sqrt(s.g * s.h_l);
    const double xi = x - s.x_m;
    if (xi <= -t * c_l) return {s.h_l, 0.0};
    if (xi < t * (s.u_m - s.c_m)) {
        const double q = 2.0 * c_l - xi / t;
        return {q * q / (9.0 * s.g), (2.0 / 3.0) * (c_l + xi / t)};
    }
    if (xi < t * s.v_c) return {s.h_m, s.u_m};
    return {s.h_r, 0.0};
}

std::array<double, 3> vortex_exact(double t, double x, double y, const VortexParams& p) {
    const double ct = std::cos(p.theta), st = std::sin(p.theta);
    const double xb = x - p.x0 - p.M * t * ct;
    const double yb = y - p.y0 - p.M * t * st;
    const double r2 = xb * xb + yb * yb;
    const double e = std::exp(-p.b * r2);
    const double h = 1.0 - p.a * p.a / (4.0 * p.b * p.g) * std::exp(-2.0 * p.b * r2);
    return {h, p.M * ct + p.a * yb * e, p.M * st - p.a * xb * e};
}

std::array<double, 2> tidal_exact(double t, double x, double h0, double z) {
    const double phase = k_pi * (4.0 * t / 86400.0 + 0.5);
    const double h = h0 + 4.0 - z - 4.0 * std::sin(phase);
    if (!(h > 0.0)) {
        std::ostringstream os;
        os << "tidal_exact: non-positive depth " << h << " at x=" << x << ", t=" << t;
        throw Error(os.str());
    }
    const double u = k_pi * (x - 1500.0) / (5400.0 * h) * std::cos(phase);
    return {h, u};
}

double irregular_bed(double x) {
    static const double xs[28] = {0,   50,  100, 150, 250, 300, 350, 400, 425, 435,
                                  450, 475, 500, 505, 530, 550, 565, 575, 600, 650,
                                  700, 750, 800, 820, 900, 950, 1000, 1500};
    static const double zs[28] = {0,   0,   2.5, 5,   5,   3,   5,   5,   7.5, 8,
                                  9,   9,   9.1, 9,   9,   6,   5.5, 5.5, 5,   4,
                                  3,   3,   2.3, 2,   1.2, 0.4, 0,   0};
    if (x < 0.0 || x > 1500.0) {
        throw Error("irregular_bed: x=" + std::to_string(x) + " outside [0, 1500]");
    }
    const double* it = std::upper_bound(xs, xs + 28, x);
    if (it == xs) return zs[0];
    if (it == xs + 28) return zs[27];
    const int i = static_cast<int>(it - xs);
    const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return zs[i - 1] + w * (zs[i] - zs[i - 1]);
}

double relative_l1_error(const Mesh& mesh, const std::vector<double>& numeric,
                         const std::vector<double>& exact) {
    if (numeric.size() != exact.size() ||
        numeric.size() != static_cast<size_t>(mesh.n_cells())) {
        throw Error("relative_l1_error: field sizes do not match the mesh");
    }
    double num = 0.0, den = 0.0;
    for (int c = 0; c < mesh.n_cells(); ++c) {
        num += mesh.area[c] * std::abs(numeric[c] - exact[c]);
        den += mesh.area[c] * std::abs(exact[c]);
    }
    if (den == 0.0) throw Error("relative_l1_error: reference field has zero L1 norm");
    return num / den;
}

double linf_error(const std::vector<double>& numeric, const std::vector<double>& exact) {
    if (numeric.size() != exact.size()) {
        throw Error("linf_error: field sizes do not match");
    }
    double m = 0.0;
    for (size_t i = 0; i < numeric.size(); ++i) {
        m = std::max(m, std::abs(numeric[i] - exact[i]));
    }
    return m;
}

namespace {

double gaussians_bed(Vec2 p) {
    static const double a[5] = {0.75, 0.7, 0.65, 0.6, 0.55};
    static const double s2[5] = {2.0, 2.0, 3.3, 2.5, 1.48};
    static const double cx[5] = {-4.0, -2.5, 0.0, 3.0, 5.0};
    static const double cy[5] = {5.0, 2.5, 0.0, -2.0, -4.0};
    double z = 0.0;
    for (int k = 0; k < 5; ++k) {
        const double dx = p.x - cx[k], dy = p.y - cy[k];
        z += a[k] * std::exp(-(dx * dx + dy * dy) / s2[k]);
    }
    return z;
}

BoundaryCondition slip_wall() {
    BoundaryCondition bc;
    bc.kind = BcKind::SlipWall;
    return bc;
}

BoundaryCondition neumann() {
    BoundaryCondition bc;
    bc.kind = BcKind::Neumann;
    return bc;
}

CasePreset stoker_preset(const std::string& name, double h_r) {
    CasePreset p;
    p.name = name;
    std::ostringstream d;
    d << "dam break in a closed 1.6 x 0.1 channel, h_l=1, h_r=" << h_r << ", dam at x=0.8";
    p.description = d.str();
    p.mesh.x0 = 0.0;
    p.mesh.y0 = 0.0;
    p.mesh.x1 = 1.6;
    p.mesh.y1 = 0.1;
    p.mesh.nx = 208;
    p.mesh.ny = 13;
    p.params.g = 9.81;
    p.t_end = 0.1;
    p.initial = [h_r](Vec2 x) {
        return Conserved{x.x <= 0.8 ? 1.0 : h_r, 0.0, 0.0};
    };
    for (const char* tag : {"left", "right", "bottom", "top"}) p.bcs[tag] = slip_wall();
    const StokerSolution sol = stoker_middle_state(1.0, h_r, 9.81, 0.8);
    p.exact = [sol](double t, Vec2 x) {
        const auto hu = stoker_exact(t, x.x, sol);
        return std::array<double, 3>{hu[0], hu[1], 0.0};
    };
    return p;
}

CasePreset circular_preset(const std::string& name, bool sloped) {
    CasePreset p;
    p.name = name;
    p.description = sloped ? "elliptic dam break with Coriolis force over a tanh-shelf bed"
                           : "elliptic dam break with Coriolis force over a flat bed";
    p.mesh.x0 = p.mesh.y0 = -10.0;
    p.mesh.x1 = p.mesh.y1 = 10.0;
    p.mesh.nx = p.mesh.ny = 50;
    p.params.g = 1.0;
    p.params.f_c = 1.0;
    p.t_end = 4.0;
    if (sloped) {
        p.bed = [](Vec2 x) { return 0.3 * (1.0 + std::tanh(1.5 * x.x)); };
    }
    auto bed = p.bed;
    p.initial = [bed](Vec2 x) {
        const double r = std::sqrt(2.5 * x.x * x.x + 0.4 * x.y * x.y);
        const double h = 1.0 + 0.25 * (1.0 - std::tanh((r - 1.0) / 0.1));
        return Conserved{bed ? h - bed(x) : h, 0.0, 0.0};
    };
    for (const char* tag : {"left", "right", "bottom", "top"}) p.bcs[tag] = neumann();
    return p;
}

}  // namespace

CasePreset preset(const std::string& name) {
    if (name == "vortex_accuracy") {
        CasePreset p;
        p.name = name;
        p.description = "travelling vortex with exact-solution boundary injection";
        p.mesh.x0 = p.mesh.y0 = -50.0;
        p.mesh.x1 = p.mesh.y1 = 50.0;
        p.mesh.nx = p.mesh.ny = 36;
        p.params.g = 1.0;
        p.params.alpha = 1.0;
        p.t_end = 20.0;
        VortexParams vp;
        vp.theta = k_pi / 6.0;
        p.initial = [vp](Vec2 x) {
            const auto s = vortex_exact(0.0, x.x, x.y, vp);
            return Conserved{s[0], s[0] * s[1], s[0] * s[2]};
        };
        BoundaryCondition bc;
        bc.kind = BcKind::Injection;
        bc.inject = [vp](double t, Vec2 x) {
            const auto s = vortex_exact(t, x.x, x.y, vp);
            return Conserved{s[0], s[0] * s[1], s[0] * s[2]};
        };
        for (const char* tag : {"left", "right", "bottom", "top"}) p.bcs[tag] = bc;
        p.exact = [vp](double t, Vec2 x) { return vortex_exact(t, x.x, x.y, vp); };
        return p;
    }
    if (name == "stoker_05") return stoker_preset(name, 0.5);
    if (name == "stoker_01") return stoker_preset(name, 0.1);
    if (name == "stoker_0025") return stoker_preset(name, 0.025);
    if (name == "tidal_irregular") {
        CasePreset p;
        p.name = name;
        p.description = "tidal forcing over the irregular 1500 m bed, quasi-1D strip";
        p.mesh.x0 = 0.0;
        p.mesh.y0 = 0.0;
        p.mesh.x1 = 1500.0;
        p.mesh.y1 = 7.5;
        p.mesh.nx = 200;
        p.mesh.ny = 1;
        p.params.g = 9.81;
        p.t_end = 10800.0;
        p.bed = [](Vec2 x) { return irregular_bed(x.x); };
        p.initial = [](Vec2 x) { return Conserved{16.0 - irregular_bed(x.x), 0.0, 0.0}; };
        BoundaryCondition tide;
        tide.kind = BcKind::FluidInOut;
        tide.h_b = 16.0;
        tide.h_b_of_t = [](double t) {
            return 20.0 - 4.0 * std::sin(k_pi * (4.0 * t / 86400.0 + 0.5));
        };
        p.bcs["left"] = tide;
        p.bcs["right"] = slip_wall();
        p.bcs["bottom"] = slip_wall();
        p.bcs["top"] = slip_wall();
        p.exact = [](double t, Vec2 x) {
            const auto hu = tidal_exact(t, x.x, 16.0, irregular_bed(x.x));
            return std::array<double, 3>{hu[0], hu[1], 0.0};
        };
        return p;
    }
    if (name == "lake_rest_gaussians") {
        CasePreset p;
        p.name = name;
        p.description = "lake at rest over five Gaussian bumps";
        p.mesh.x0 = p.mesh.y0 = -10.0;
        p.mesh.x1 = p.mesh.y1 = 10.0;
        p.mesh.nx = p.mesh.ny = 23;
        p.params.g = 9.81;
        p.t_end = 3600.0;
        p.bed = gaussians_bed;
        p.initial = [](Vec2 x) { return Conserved{1.0 - gaussians_bed(x), 0.0, 0.0}; };
        for (const char* tag : {"left", "right", "bottom", "top"}) p.bcs[tag] = slip_wall();
        p.exact = [](double, Vec2 x) {
            return std::array<double, 3>{1.0 - gaussians_bed(x), 0.0, 0.0};
        };
        return p;
    }
    if (name == "lake_rest_irregular") {
        CasePreset p;
        p.name = name;
        p.description = "lake at rest over the irregular bed on a 1500 x 500 basin";
        p.mesh.x0 = 0.0;
        p.mesh.y0 = 0.0;
        p.mesh.x1 = 1500.0;
        p.mesh.y1 = 500.0;
        p.mesh.nx = 30;
        p.mesh.ny = 10;
        p.params.g = 9.81;
        p.t_end = 3600.0;
        p.bed = [](Vec2 x) { return irregular_bed(x.x); };
        p.initial = [](Vec2 x) { return Conserved{20.0 - irregular_bed(x.x), 0.0, 0.0}; };
        for (const char* tag : {"left", "right", "bottom", "top"}) p.bcs[tag] = slip_wall();
        p.exact = [](double, Vec2 x) {
            return std::array<double, 3>{20.0 - irregular_bed(x.x), 0.0, 0.0};
        };
        return p;
    }
    if (name == "leveque_perturbation") {
        CasePreset p;
        p.name = name;
        p.description = "small surface perturbation passing over a smooth hump";
        p.mesh.x0 = 0.0;
        p.mesh.y0 = 0.0;
        p.mesh.x1 = 2.0;
        p.mesh.y1 = 1.0;
        p.mesh.nx = 200;
        p.mesh.ny = 100;
        p.params.g = 9.81;
        p.t_end = 0.2;
        p.bed = [](Vec2 x) {
            const double dx = x.x - 0.9, dy = x.y - 0.5;
            return 0.8 * std::exp(-5.0 * dx * dx - 50.0 * dy * dy);
        };
        auto bed = p.bed;
        p.initial = [bed](Vec2 x) {
            const double bump = (x.x >= 0.05 && x.x <= 0.15) ? 0.01 : 0.0;
            return Conserved{1.0 - bed(x) + bump, 0.0, 0.0};
        };
        for (const char* tag : {"left", "right", "bottom", "top"}) p.bcs[tag] = neumann();
        return p;
    }
    if (name == "circular_dam_flat") return circular_preset(name, false);
    if (name == "circular_dam_coriolis") return circular_preset(name, true);
    if (name == "cadam_bend") {
        CasePreset p;
        p.name = name;
        p.description = "reservoir release through an L-shaped channel with Manning friction";
        auto ticks = [](double a, double b, int n, std::vector<double>& out) {
            const double d = (b - a) / n;
            for (int i = (out.empty() ? 0 : 1); i <= n; ++i) out.push_back(a + i * d);
            out.back() = b;
        };
        ticks(0.0, 2.44, 20, p.mesh.x_ticks);
        ticks(2.44, 6.31, 32, p.mesh.x_ticks);
        ticks(6.31, 6.805, 4, p.mesh.x_ticks);
        ticks(0.0, 0.445, 4, p.mesh.y_ticks);
        ticks(0.445, 0.94, 4, p.mesh.y_ticks);
        ticks(0.94, 2.39, 12, p.mesh.y_ticks);
        ticks(2.39, 3.865, 12, p.mesh.y_ticks);
        p.mesh.keep = [](Vec2 c) {
            const bool reservoir = c.x < 2.44 && c.y < 2.39;
            const bool leg1 = c.x > 2.44 && c.x < 6.805 && c.y > 0.445 && c.y < 0.94;
            const bool leg2 = c.x > 6.31 && c.x < 6.805 && c.y > 0.94 && c.y < 3.865;
            return reservoir || leg1 || leg2;
        };
        p.params.g = 9.81;
        p.params.eta = 0.0095;
        p.t_end = 2.0;
        p.bed = [](Vec2 x) { return x.x < 2.44 ? 0.0 : 0.33; };
        p.initial = [](Vec2 x) {
            return Conserved{x.x < 2.44 ? 0.58 : 0.01, 0.0, 0.0};
        };
        p.bcs["wall"] = slip_wall();
        return p;
    }
    std::ostringstream os;
    os << "unknown preset '" << name << "'; available:";
    for (const auto& n : preset_names()) os << " " << n;
    throw ConfigError(os.str());
}

std::vector<std::string> preset_names() {
    return {"vortex_accuracy",   "stoker_05",        "stoker_01",
            "stoker_0025",       "tidal_irregular",  "lake_rest_gaussians",
            "lake_rest_irregular", "leveque_perturbation", "circular_dam_flat",
            "circular_dam_coriolis", "cadam_bend"};
}

}  // namespace swe
