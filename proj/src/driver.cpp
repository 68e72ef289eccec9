#include "swe/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

namespace swe {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_num(const std::string& v, const std::string& ctx) {
    try {
        size_t used = 0;
        const double x = std::stod(v, &used);
        if (trim(v.substr(used)).empty()) return x;
    } catch (const std::exception&) {
    }
    throw ConfigError(ctx + ": expected a number, got '" + v + "'");
}

int parse_int(const std::string& v, const std::string& ctx) {
    try {
        size_t used = 0;
        const int x = std::stoi(v, &used);
        if (trim(v.substr(used)).empty()) return x;
    } catch (const std::exception&) {
    }
    throw ConfigError(ctx + ": expected an integer, got '" + v + "'");
}

bool parse_bool(const std::string& v, const std::string& ctx) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError(ctx + ": expected a boolean, got '" + v + "'");
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

BoundaryCondition parse_bc(const std::string& value, const std::string& ctx) {
    const auto tok = split_ws(value);
    if (tok.empty()) throw ConfigError(ctx + ": empty boundary condition");
    BoundaryCondition bc;
    if (tok[0] == "slip_wall") {
        bc.kind = BcKind::SlipWall;
    } else if (tok[0] == "noslip_wall") {
        bc.kind = BcKind::NoSlipWall;
    } else if (tok[0] == "neumann") {
        bc.kind = BcKind::Neumann;
    } else if (tok[0] == "fluid") {
        bc.kind = BcKind::FluidInOut;
    } else {
        throw ConfigError(ctx + ": unknown boundary kind '" + tok[0] +
                          "' (expected slip_wall, noslip_wall, neumann, or fluid)");
    }
    for (size_t i = 1; i < tok.size(); ++i) {
        const size_t eq = tok[i].find('=');
        if (eq == std::string::npos) {
            throw ConfigError(ctx + ": expected key=value, got '" + tok[i] + "'");
        }
        const std::string k = tok[i].substr(0, eq), v = tok[i].substr(eq + 1);
        if (k == "h") {
            bc.h_b = parse_num(v, ctx);
        } else if (k == "u") {
            bc.u_b = parse_num(v, ctx);
        } else if (k == "mode") {
            if (v == "auto") {
                bc.mode = FluidMode::Auto;
            } else if (v == "sub") {
                bc.mode = FluidMode::ForceSubcritical;
            } else if (v == "super") {
                bc.mode = FluidMode::ForceSupercritical;
            } else {
                throw ConfigError(ctx + ": unknown mode '" + v + "'");
            }
        } else {
            throw ConfigError(ctx + ": unknown boundary option '" + k + "'");
        }
    }
    if (bc.kind == BcKind::FluidInOut && !(bc.h_b > 0.0)) {
        throw ConfigError(ctx + ": fluid boundary requires h=<positive depth>");
    }
    return bc;
}

struct Totals {
    double mass = 0.0, energy = 0.0;
};

Totals totals(const Mesh& mesh, const State& st, const Bed& bed, double g) {
    Totals t;
    for (int c = 0; c < mesh.n_cells(); ++c) {
        t.mass += mesh.area[c] * st.h[c];
        t.energy += mesh.area[c] *
                    energy(Conserved{st.h[c], st.hu[c], st.hv[c]}, bed.z_cell[c], g);
    }
    return t;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

CaseConfig config_from_preset(const std::string& name) {
    CaseConfig cfg;
    cfg.preset = preset(name);
    return cfg;
}

CaseConfig parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open config file '" + path + "'");

    CaseConfig cfg;
    bool have_preset = false;
    double init_h = -1.0, init_u = 0.0, init_v = 0.0;
    std::optional<int> over_nx, over_ny;
    std::optional<double> over_x0, over_y0, over_x1, over_y1;
    std::optional<DiagonalPattern> over_pattern;
    std::optional<std::string> over_file;
    std::map<std::string, BoundaryCondition> bc_over;
    std::map<std::string, std::pair<std::string, int>> raw_params;

    std::string line, section;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const std::string ctx = path + ":" + std::to_string(lineno);
        const size_t cpos = line.find_first_of("#;");
        if (cpos != std::string::npos) line.erase(cpos);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(ctx + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(ctx + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) throw ConfigError(ctx + ": expected key = value");

        if (section == "case") {
            if (key == "preset") {
                cfg.preset = preset(value);
                have_preset = true;
            } else if (key == "t_end") {
                cfg.t_end = parse_num(value, ctx);
            } else if (key == "output_every") {
                cfg.output_every = parse_num(value, ctx);
            } else if (key == "out_dir") {
                cfg.out_dir = value;
            } else if (key == "write_vtk") {
                cfg.write_vtk = parse_bool(value, ctx);
            } else if (key == "name") {
                cfg.preset.name = value;
            } else {
                throw ConfigError(ctx + ": unknown [case] key '" + key + "'");
            }
        } else if (section == "mesh") {
            if (key == "nx") {
                over_nx = parse_int(value, ctx);
            } else if (key == "ny") {
                over_ny = parse_int(value, ctx);
            } else if (key == "x0") {
                over_x0 = parse_num(value, ctx);
            } else if (key == "y0") {
                over_y0 = parse_num(value, ctx);
            } else if (key == "x1") {
                over_x1 = parse_num(value, ctx);
            } else if (key == "y1") {
                over_y1 = parse_num(value, ctx);
            } else if (key == "file") {
                over_file = value;
            } else if (key == "pattern") {
                if (value == "alternating") {
                    over_pattern = DiagonalPattern::Alternating;
                } else if (value == "fixed") {
                    over_pattern = DiagonalPattern::Fixed;
                } else if (value == "offset") {
                    over_pattern = DiagonalPattern::Offset;
                } else {
                    throw ConfigError(ctx + ": unknown pattern '" + value + "'");
                }
            } else {
                throw ConfigError(ctx + ": unknown [mesh] key '" + key + "'");
            }
        } else if (section == "params") {
            raw_params[key] = {value, lineno};
        } else if (section == "boundary") {
            bc_over[key] = parse_bc(value, ctx);
        } else if (section == "initial") {
            if (key == "h") {
                init_h = parse_num(value, ctx);
            } else if (key == "u") {
                init_u = parse_num(value, ctx);
            } else if (key == "v") {
                init_v = parse_num(value, ctx);
            } else {
                throw ConfigError(ctx + ": unknown [initial] key '" + key + "'");
            }
        } else if (section == "sections") {
            const auto tok = split_ws(value);
            if (tok.size() < 2 || tok.size() > 3 || tok[0].size() != 1 ||
                (tok[0][0] != 'x' && tok[0][0] != 'y')) {
                throw ConfigError(ctx + ": expected '<x|y> <value> [band]'");
            }
            SectionSpec s;
            s.axis = tok[0][0];
            s.value = parse_num(tok[1], ctx);
            if (tok.size() == 3) s.band = parse_num(tok[2], ctx);
            s.label = key;
            cfg.sections.push_back(s);
        } else {
            throw ConfigError(ctx + ": unknown section [" + section + "]");
        }
    }

    if (!have_preset) {
        if (init_h <= 0.0) {
            throw ConfigError(path +
                              ": either [case] preset or [initial] h > 0 must be given");
        }
        cfg.preset.name = cfg.preset.name.empty() ? "custom" : cfg.preset.name;
        cfg.preset.description = "flat-bed case from config file";
        cfg.preset.initial = [init_h, init_u, init_v](Vec2) {
            return Conserved{init_h, init_h * init_u, init_h * init_v};
        };
        BoundaryCondition def;
        def.kind = BcKind::SlipWall;
        cfg.preset.bcs["default"] = def;
        cfg.preset.t_end = 1.0;
    }
    const bool mesh_touched = over_nx || over_ny || over_x0 || over_y0 || over_x1 ||
                              over_y1 || over_pattern || over_file;
    if (mesh_touched) {
        if (over_file) {
            cfg.preset.mesh = MeshRecipe{};
            cfg.preset.mesh.file = *over_file;
        } else {
            MeshRecipe& m = cfg.preset.mesh;
            if (!m.x_ticks.empty()) {
                throw ConfigError(path + ": [mesh] overrides are not available for preset '" +
                                  cfg.preset.name + "' (fixed lattice geometry)");
            }
            if (over_nx) m.nx = *over_nx;
            if (over_ny) m.ny = *over_ny;
            if (over_x0) m.x0 = *over_x0;
            if (over_y0) m.y0 = *over_y0;
            if (over_x1) m.x1 = *over_x1;
            if (over_y1) m.y1 = *over_y1;
            if (over_pattern) m.pattern = *over_pattern;
        }
    }
    for (const auto& [tag, bc] : bc_over) cfg.preset.bcs[tag] = bc;
    for (const auto& [key, vp] : raw_params) {
        const std::string ctx = path + ":" + std::to_string(vp.second);
        PhysicalParams& pp = cfg.preset.params;
        if (key == "g") {
            pp.g = parse_num(vp.first, ctx);
        } else if (key == "cfl") {
            pp.cfl = parse_num(vp.first, ctx);
        } else if (key == "alpha") {
            pp.alpha = parse_num(vp.first, ctx);
        } else if (key == "eta") {
            pp.eta = parse_num(vp.first, ctx);
        } else if (key == "f_c") {
            pp.f_c = parse_num(vp.first, ctx);
        } else if (key == "h_min") {
            pp.h_min = parse_num(vp.first, ctx);
        } else {
            throw ConfigError(ctx + ": unknown [params] key '" + key + "'");
        }
    }
    return cfg;
}

RunResult run_case(const CaseConfig& cfg) {
    const auto wall0 = std::chrono::steady_clock::now();
    const CasePreset& p = cfg.preset;
    if (!p.initial) throw ConfigError("case '" + p.name + "' has no initial state");
    p.params.validate();

    RunResult out;
    out.mesh = build_from_recipe(p.mesh);
    const Mesh& mesh = out.mesh;
    out.bed = make_bed(mesh, p.bed);
    const Bed& bed = out.bed;
    out.state = make_state(mesh, p.initial);
    State& st = out.state;
    const PhysicalParams& par = p.params;

    for (int c = 0; c < mesh.n_cells(); ++c) {
        if (!(st.h[c] > 0.0)) {
            throw ConfigError("initial depth is not positive in cell " + std::to_string(c));
        }
    }

    std::vector<BoundaryCondition> bc(mesh.tag_names.size());
    for (size_t i = 0; i < mesh.tag_names.size(); ++i) {
        auto it = p.bcs.find(mesh.tag_names[i]);
        if (it == p.bcs.end()) it = p.bcs.find("default");
        if (it == p.bcs.end()) {
            throw ConfigError("no boundary condition bound to tag '" + mesh.tag_names[i] +
                              "'");
        }
        bc[i] = it->second;
    }

    const double t_end = cfg.t_end >= 0.0 ? cfg.t_end : p.t_end;
    if (t_end < 0.0) throw ConfigError("end time must be non-negative");

    if (!cfg.out_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(cfg.out_dir, ec);
        if (ec) {
            throw IoError("cannot create output directory '" + cfg.out_dir +
                          "': " + ec.message());
        }
    }

    const double energy0 = totals(mesh, st, bed, par.g).energy;
    SolverScratch ws;
    StepStats cum;
    long steps = 0;
    double dt_min = std::numeric_limits<double>::infinity(), dt_max = 0.0;
    int snap_idx = 0;

    auto checkpoint = [&](double t) {
        Checkpoint ck;
        ck.t = t;
        ck.steps = steps;
        ck.dt_min = steps ? dt_min : 0.0;
        ck.dt_max = dt_max;
        const Totals tt = totals(mesh, st, bed, par.g);
        ck.mass = tt.mass;
        ck.energy = tt.energy;
        ck.h_min = *std::min_element(st.h.begin(), st.h.end());
        ck.h_max = *std::max_element(st.h.begin(), st.h.end());
        ck.surf_min = std::numeric_limits<double>::infinity();
        ck.surf_max = -ck.surf_min;
        ck.u_max = 0.0;
        for (int c = 0; c < mesh.n_cells(); ++c) {
            const double s = st.h[c] + bed.z_cell[c];
            ck.surf_min = std::min(ck.surf_min, s);
            ck.surf_max = std::max(ck.surf_max, s);
            ck.u_max = std::max(
                ck.u_max, std::sqrt(st.hu[c] * st.hu[c] + st.hv[c] * st.hv[c]) / st.h[c]);
        }
        if (p.exact) {
            std::vector<double> h_ex(mesh.n_cells()), hu_ex(mesh.n_cells());
            double num = 0.0, den = 0.0;
            for (int c = 0; c < mesh.n_cells(); ++c) {
                const auto s = p.exact(t, mesh.centroid[c]);
                h_ex[c] = s[0];
                hu_ex[c] = s[0] * s[1];
                num += mesh.area[c] * std::abs(st.hu[c] - hu_ex[c]);
                den += mesh.area[c] * std::abs(hu_ex[c]);
            }
            ck.err_l1_h = relative_l1_error(mesh, st.h, h_ex);
            ck.err_linf_h = linf_error(st.h, h_ex);
            if (den > 0.0) ck.err_l1_hu = num / den;
        }
        ck.clamped_feet = cum.clamped_feet;
        ck.lsm_fallbacks = cum.lsm_fallbacks;
        ck.source_fallbacks = cum.source_fallbacks;
        ck.energy_drift_flag = ck.energy > energy0 * 1.01 + 1e-300;
        out.report.checkpoints.push_back(ck);

        if (!cfg.out_dir.empty()) {
            char suffix[32];
            std::snprintf(suffix, sizeof suffix, "_%04d", snap_idx);
            if (cfg.write_vtk) {
                write_vtk_snapshot(mesh, st, bed,
                                   cfg.out_dir + "/" + p.name + suffix + ".vtk");
            }
            for (size_t i = 0; i < cfg.sections.size(); ++i) {
                const SectionSpec& s = cfg.sections[i];
                const std::string label = s.label.empty()
                                              ? "section" + std::to_string(i)
                                              : s.label;
                write_cross_section(mesh, st, bed, s,
                                    cfg.out_dir + "/" + p.name + "_" + label + suffix +
                                        ".csv");
            }
        }
        ++snap_idx;
        steps = 0;
        dt_min = std::numeric_limits<double>::infinity();
        dt_max = 0.0;
    };

    checkpoint(0.0);
    double next_out = cfg.output_every > 0.0 ? cfg.output_every : t_end;
    while (st.t < t_end) {
        const double stop = std::min(t_end, next_out);
        double dt = compute_dt(mesh, st, par);
        bool clipped = false;
        if (st.t + dt >= stop || !(dt > 0.0)) {
            dt = stop - st.t;
            clipped = true;
        }
        step(mesh, bed, par, bc, st, dt, ws, &cum);
        ++steps;
        dt_min = std::min(dt_min, dt);
        dt_max = std::max(dt_max, dt);
        if (clipped) {
            st.t = stop;  // land exactly on the checkpoint
            checkpoint(st.t);
            if (cfg.output_every > 0.0 && stop == next_out) next_out += cfg.output_every;
        }
    }

    out.report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    return out;
}

void write_report(const RunReport& report, std::ostream& os) {
    os << "# t steps dt_min dt_max mass energy h_min h_max surf_min surf_max u_max"
          " err_l1_h err_l1_hu err_linf_h clamped_feet lsm_fallbacks source_fallbacks"
          " energy_drift\n";
    for (const Checkpoint& c : report.checkpoints) {
        os << fmt(c.t) << ' ' << c.steps << ' ' << fmt(c.dt_min) << ' ' << fmt(c.dt_max) << ' '
           << fmt(c.mass) << ' ' << fmt(c.energy) << ' ' << fmt(c.h_min) << ' '
           << fmt(c.h_max) << ' ' << fmt(c.surf_min) << ' ' << fmt(c.surf_max) << ' '
           << fmt(c.u_max) << ' ' << fmt(c.err_l1_h) << ' ' << fmt(c.err_l1_hu) << ' '
           << fmt(c.err_linf_h) << ' ' << c.clamped_feet << ' ' << c.lsm_fallbacks << ' '
           << c.source_fallbacks << ' ' << (c.energy_drift_flag ? 1 : 0) << '\n';
    }
}

std::vector<StudyRow> convergence_study(const CaseConfig& base, const std::vector<int>& nx_list,
                                        std::ostream* log) {
    if (nx_list.size() < 2) throw ConfigError("convergence study needs at least two meshes");
    if (!base.preset.mesh.x_ticks.empty() || !base.preset.mesh.file.empty()) {
        throw ConfigError("convergence study supports generated rectangle meshes only");
    }
    if (!base.preset.exact) {
        throw ConfigError("convergence study requires a case with an exact solution");
    }
    const double aspect =
        static_cast<double>(base.preset.mesh.ny) / static_cast<double>(base.preset.mesh.nx);
    std::vector<StudyRow> rows;
    for (const int nx : nx_list) {
        if (nx < 1) throw ConfigError("mesh resolution must be positive");
        CaseConfig c = base;
        c.out_dir.clear();
        c.write_vtk = false;
        c.sections.clear();
        c.output_every = 0.0;
        c.preset.mesh.nx = nx;
        c.preset.mesh.ny = std::max(1, static_cast<int>(std::lround(nx * aspect)));
        const RunResult r = run_case(c);
        StudyRow row;
        row.nx = nx;
        row.cells = r.mesh.n_cells();
        row.max_edge = r.mesh.max_edge_len;
        row.err_l1_h = r.report.checkpoints.back().err_l1_h;
        row.err_l1_hu = r.report.checkpoints.back().err_l1_hu;
        row.seconds = r.report.wall_seconds;
        row.order = std::numeric_limits<double>::quiet_NaN();
        if (!rows.empty() && rows.back().err_l1_h > 0.0 && row.err_l1_h > 0.0) {
            row.order = std::log(rows.back().err_l1_h / row.err_l1_h) /
                        std::log(rows.back().max_edge / row.max_edge);
        }
        rows.push_back(row);
        if (log) {
            std::ostringstream os;
            write_study({row}, os);
            std::string s = os.str();
            *log << s.substr(s.find('\n') + 1) << std::flush;
        }
    }
    return rows;
}

void write_study(const std::vector<StudyRow>& rows, std::ostream& os) {
    os << "# nx cells max_edge err_l1_h err_l1_hu order seconds\n";
    for (const StudyRow& r : rows) {
        os << r.nx << ' ' << r.cells << ' ' << fmt(r.max_edge) << ' ' << fmt(r.err_l1_h) << ' '
           << (r.err_l1_hu >= 0.0 ? fmt(r.err_l1_hu) : "-") << ' '
           << (std::isnan(r.order) ? "-" : fmt(r.order)) << ' ' << fmt(r.seconds) << '\n';
    }
}

}  // namespace swe
