#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "swe/driver.hpp"

namespace {

swe::CaseConfig resolve_config(const std::string& config_path, const std::string& preset_name) {
    if (!config_path.empty()) return swe::parse_config_file(config_path);
    if (!preset_name.empty()) return swe::config_from_preset(preset_name);
    throw swe::ConfigError("either a config file or --preset is required");
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw swe::IoError("cannot open '" + path + "' for writing");
    return f;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-volume shallow-water solver on triangular meshes"};
    app.require_subcommand(1);

    std::string config_path, preset_name, out_dir, report_path;
    double t_end = -1.0, output_every = -1.0;
    bool vtk = false;

    CLI::App* run = app.add_subcommand("run", "run one case and print its report");
    run->add_option("config", config_path, "INI config file");
    run->add_option("--preset", preset_name, "built-in case name (see list-presets)");
    run->add_option("--t-end", t_end, "override the end time");
    run->add_option("--output-every", output_every, "checkpoint interval (0: final only)");
    run->add_option("--out-dir", out_dir, "directory for snapshot/section files");
    run->add_flag("--vtk", vtk, "write VTK snapshots at checkpoints");
    run->add_option("--report", report_path, "also write the report to this file");

    std::vector<int> meshes;
    std::string study_out;
    CLI::App* study = app.add_subcommand("study", "error study over a mesh ladder");
    study->add_option("config", config_path, "INI config file");
    study->add_option("--preset", preset_name, "built-in case name (see list-presets)");
    study->add_option("--t-end", t_end, "override the end time");
    study->add_option("--meshes", meshes, "comma-separated nx ladder, e.g. 16,32,64")
        ->delimiter(',')
        ->required();
    study->add_option("--out", study_out, "also write the study table to this file");

    CLI::App* lp = app.add_subcommand("list-presets", "list the built-in cases");

    int g_nx = 10, g_ny = 10;
    double g_x0 = 0.0, g_y0 = 0.0, g_x1 = 1.0, g_y1 = 1.0;
    std::string g_out, g_pattern = "alternating";
    CLI::App* mg = app.add_subcommand("mesh-gen", "write a rectangle mesh file");
    mg->add_option("--nx", g_nx, "cells along x");
    mg->add_option("--ny", g_ny, "cells along y");
    mg->add_option("--x0", g_x0, "domain lower x");
    mg->add_option("--y0", g_y0, "domain lower y");
    mg->add_option("--x1", g_x1, "domain upper x");
    mg->add_option("--y1", g_y1, "domain upper y");
    mg->add_option("--pattern", g_pattern, "diagonal pattern: alternating or fixed");
    mg->add_option("--out", g_out, "output mesh file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (lp->parsed()) {
            for (const std::string& name : swe::preset_names()) {
                std::printf("%-22s %s\n", name.c_str(), swe::preset(name).description.c_str());
            }
        } else if (run->parsed()) {
            swe::CaseConfig cfg = resolve_config(config_path, preset_name);
            if (t_end >= 0.0) cfg.t_end = t_end;
            if (output_every >= 0.0) cfg.output_every = output_every;
            if (!out_dir.empty()) cfg.out_dir = out_dir;
            if (vtk) cfg.write_vtk = true;
            const swe::RunResult r = swe::run_case(cfg);
            swe::write_report(r.report, std::cout);
            if (!report_path.empty()) {
                std::ofstream f = open_out(report_path);
                swe::write_report(r.report, f);
            }
            std::fprintf(stderr, "case '%s': %d cells, finished t=%g in %.3f s\n",
                         cfg.preset.name.c_str(), r.mesh.n_cells(), r.state.t,
                         r.report.wall_seconds);
        } else if (study->parsed()) {
            swe::CaseConfig cfg = resolve_config(config_path, preset_name);
            if (t_end >= 0.0) cfg.t_end = t_end;
            std::cout << "# nx cells max_edge err_l1_h err_l1_hu order seconds\n";
            const auto rows = swe::convergence_study(cfg, meshes, &std::cout);
            if (!study_out.empty()) {
                std::ofstream f = open_out(study_out);
                swe::write_study(rows, f);
            }
        } else if (mg->parsed()) {
            swe::DiagonalPattern pat;
            if (g_pattern == "alternating") {
                pat = swe::DiagonalPattern::Alternating;
            } else if (g_pattern == "fixed") {
                pat = swe::DiagonalPattern::Fixed;
            } else if (g_pattern == "offset") {
                pat = swe::DiagonalPattern::Offset;
            } else {
                throw swe::ConfigError("unknown pattern '" + g_pattern + "'");
            }
            const swe::Mesh mesh = swe::generate_rect_mesh(g_x0, g_y0, g_x1, g_y1, g_nx, g_ny, pat);
            swe::write_mesh_file(mesh, g_out);
            std::fprintf(stderr, "wrote %d cells, %d nodes to %s\n", mesh.n_cells(),
                         mesh.n_nodes(), g_out.c_str());
        }
    } catch (const swe::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const swe::MeshError& e) {
        std::cerr << "mesh error: " << e.what() << '\n';
        return 3;
    } catch (const swe::SolverError& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return 4;
    } catch (const swe::IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
