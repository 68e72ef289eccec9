#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "swe/driver.hpp"

using namespace swe;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
    const std::string path = "/tmp/" + name;
    std::ofstream f(path);
    f << text;
    f.close();
    return path;
}

}  // namespace

TEST_CASE("config files override presets") {
    const std::string path = write_temp("swe_cfg_ok.ini",
                                        "# comment\n"
                                        "[case]\n"
                                        "preset = circular_dam_flat\n"
                                        "t_end = 0.25  ; trailing comment\n"
                                        "output_every = 0.05\n"
                                        "[mesh]\n"
                                        "nx = 12\n"
                                        "ny = 14\n"
                                        "pattern = fixed\n"
                                        "[params]\n"
                                        "cfl = 0.5\n"
                                        "g = 1.5\n"
                                        "[boundary]\n"
                                        "left = fluid h=2.0 u=0.3 mode=sub\n"
                                        "[sections]\n"
                                        "mid = y 0.0 0.2\n");
    const CaseConfig cfg = parse_config_file(path);
    CHECK(cfg.preset.name == "circular_dam_flat");
    CHECK(cfg.t_end == doctest::Approx(0.25));
    CHECK(cfg.output_every == doctest::Approx(0.05));
    CHECK(cfg.preset.mesh.nx == 12);
    CHECK(cfg.preset.mesh.ny == 14);
    CHECK(cfg.preset.mesh.pattern == DiagonalPattern::Fixed);
    CHECK(cfg.preset.params.cfl == doctest::Approx(0.5));
    CHECK(cfg.preset.params.g == doctest::Approx(1.5));
    REQUIRE(cfg.preset.bcs.count("left") == 1);
    const BoundaryCondition& bc = cfg.preset.bcs.at("left");
    CHECK(bc.kind == BcKind::FluidInOut);
    CHECK(bc.h_b == doctest::Approx(2.0));
    CHECK(bc.u_b == doctest::Approx(0.3));
    CHECK(bc.mode == FluidMode::ForceSubcritical);
    REQUIRE(cfg.sections.size() == 1);
    CHECK(cfg.sections[0].axis == 'y');
    CHECK(cfg.sections[0].value == doctest::Approx(0.0));
    CHECK(cfg.sections[0].band == doctest::Approx(0.2));
    CHECK(cfg.sections[0].label == "mid");
    std::remove(path.c_str());
}

TEST_CASE("config errors carry file and line") {
    const std::string path = write_temp("swe_cfg_bad.ini",
                                        "[case]\n"
                                        "preset = circular_dam_flat\n"
                                        "t_end = soon\n");
    try {
        parse_config_file(path);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("swe_cfg_bad.ini:3") != std::string::npos);
    }
    std::remove(path.c_str());

    const std::string bad_key = write_temp("swe_cfg_badkey.ini", "[case]\nunknown = 1\n");
    CHECK_THROWS_AS(parse_config_file(bad_key), ConfigError);
    std::remove(bad_key.c_str());

    const std::string no_case =
        write_temp("swe_cfg_nocase.ini", "[params]\ncfl = 0.5\n");
    CHECK_THROWS_AS(parse_config_file(no_case), ConfigError);
    std::remove(no_case.c_str());

    CHECK_THROWS_AS(parse_config_file("/tmp/swe_cfg_missing.ini"), IoError);
}

TEST_CASE("custom flat cases come from [initial]") {
    const std::string path = write_temp("swe_cfg_custom.ini",
                                        "[case]\n"
                                        "name = box\n"
                                        "t_end = 0.05\n"
                                        "[mesh]\n"
                                        "nx = 6\n"
                                        "ny = 6\n"
                                        "[initial]\n"
                                        "h = 2.0\n"
                                        "u = 0\n"
                                        "v = 0\n");
    const CaseConfig cfg = parse_config_file(path);
    CHECK(cfg.preset.name == "box");
    const RunResult r = run_case(cfg);
    // a uniform box at rest stays exactly uniform
    CHECK(r.state.t == 0.05);
    for (int c = 0; c < r.mesh.n_cells(); ++c) CHECK(r.state.h[c] == doctest::Approx(2.0));
    REQUIRE(r.report.checkpoints.size() == 2);
    CHECK(r.report.checkpoints.back().t == 0.05);
    CHECK(r.report.checkpoints.back().mass ==
          doctest::Approx(r.report.checkpoints.front().mass).epsilon(1e-14));
    std::remove(path.c_str());
}

TEST_CASE("run_case lands exactly on checkpoints") {
    CaseConfig cfg = config_from_preset("circular_dam_flat");
    cfg.preset.mesh.nx = 10;
    cfg.preset.mesh.ny = 10;
    cfg.t_end = 0.21;
    cfg.output_every = 0.1;
    const RunResult r = run_case(cfg);
    REQUIRE(r.report.checkpoints.size() == 4);  // t = 0, 0.1, 0.2, 0.21
    CHECK(r.report.checkpoints[0].t == 0.0);
    CHECK(r.report.checkpoints[1].t == 0.1);
    CHECK(r.report.checkpoints[2].t == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(r.report.checkpoints[3].t == 0.21);
    CHECK(r.state.t == 0.21);
    for (const Checkpoint& c : r.report.checkpoints) {
        CHECK(c.h_min > 0.0);
        CHECK(c.h_max >= c.h_min);
        CHECK(!c.energy_drift_flag);
    }
    CHECK(r.report.checkpoints[1].steps > 0);
}

TEST_CASE("zero end time produces only the initial checkpoint") {
    CaseConfig cfg = config_from_preset("circular_dam_flat");
    cfg.preset.mesh.nx = 8;
    cfg.preset.mesh.ny = 8;
    cfg.t_end = 0.0;
    const RunResult r = run_case(cfg);
    REQUIRE(r.report.checkpoints.size() == 1);
    CHECK(r.report.checkpoints[0].t == 0.0);
    CHECK(r.report.checkpoints[0].steps == 0);
}

TEST_CASE("reports are deterministic") {
    CaseConfig cfg = config_from_preset("stoker_05");
    cfg.preset.mesh.nx = 32;
    cfg.preset.mesh.ny = 2;
    cfg.t_end = 0.02;
    const RunResult a = run_case(cfg);
    const RunResult b = run_case(cfg);
    std::ostringstream sa, sb;
    write_report(a.report, sa);
    write_report(b.report, sb);
    CHECK(sa.str() == sb.str());
    CHECK(sa.str().find("wall") == std::string::npos);  // no timing in reports
    // oracle errors are populated for cases with an exact solution
    CHECK(a.report.checkpoints.back().err_l1_h >= 0.0);
}

TEST_CASE("convergence study runs a ladder and reports orders") {
    CaseConfig cfg = config_from_preset("stoker_05");
    cfg.t_end = 0.01;
    const auto rows = convergence_study(cfg, {32, 48});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].nx == 32);
    CHECK(rows[1].nx == 48);
    CHECK(rows[0].cells < rows[1].cells);
    CHECK(rows[0].max_edge > rows[1].max_edge);
    CHECK(rows[0].err_l1_h > 0.0);
    CHECK(rows[1].err_l1_h > 0.0);
    CHECK(std::isnan(rows[0].order));
    CHECK(std::isfinite(rows[1].order));
    // ny follows the preset aspect ratio (13/208 = 1/16)
    CHECK(rows[0].cells == 2 * 32 * 2);

    std::ostringstream os;
    write_study(rows, os);
    CHECK(os.str().find("# nx cells") == 0);
    CHECK(os.str().find(" - ") != std::string::npos);  // first-row order placeholder

    CaseConfig no_exact = config_from_preset("circular_dam_flat");
    CHECK_THROWS_AS(convergence_study(no_exact, {8, 12}), ConfigError);
    CaseConfig masked = config_from_preset("cadam_bend");
    CHECK_THROWS_AS(convergence_study(masked, {8, 12}), ConfigError);
    CHECK_THROWS_AS(convergence_study(cfg, {32}), ConfigError);
}

TEST_CASE("vtk snapshots round-trip bitwise") {
    const Mesh m = generate_rect_mesh(0.0, 0.0, 1.0, 1.0, 3, 2);
    const Bed bed = make_bed(m, [](Vec2 p) { return 0.1 * p.x + 0.05 * p.y; });
    State st = make_state(m, [](Vec2 p) {
        return Conserved{1.0 + p.x / 3.0, 0.123456789012345, -0.5 + p.y};
    });
    st.t = 0.375;
    const std::string path = "/tmp/swe_test_snap.vtk";
    write_vtk_snapshot(m, st, bed, path);
    const VtkSnapshot snap = read_vtk_snapshot(path);
    REQUIRE(static_cast<int>(snap.points.size()) == m.n_nodes());
    REQUIRE(static_cast<int>(snap.tris.size()) == m.n_cells());
    REQUIRE(snap.cell_data.count("h") == 1);
    REQUIRE(snap.cell_data.count("h_plus_Z") == 1);
    for (int v = 0; v < m.n_nodes(); ++v) {
        CHECK(snap.points[v].x == m.nodes[v].x);  // exact round trip
        CHECK(snap.points[v].y == m.nodes[v].y);
    }
    for (int c = 0; c < m.n_cells(); ++c) {
        CHECK(snap.cell_data.at("h")[c] == st.h[c]);
        CHECK(snap.cell_data.at("hu")[c] == st.hu[c]);
        CHECK(snap.cell_data.at("Z")[c] == bed.z_cell[c]);
    }
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_vtk_snapshot("/tmp/swe_no_such.vtk"), IoError);
}

TEST_CASE("cross sections export sorted centroid samples") {
    const Mesh m = generate_rect_mesh(0.0, 0.0, 1.0, 1.0, 4, 4);
    const Bed bed = make_bed(m, nullptr);
    const State st = make_state(m, [](Vec2 p) { return Conserved{1.0 + p.x, 0.0, 0.0}; });
    SectionSpec spec;
    spec.axis = 'y';
    spec.value = 0.5;
    spec.band = 0.13;  // one row of centroids
    const std::string path = "/tmp/swe_test_sec.csv";
    write_cross_section(m, st, bed, spec, path);
    std::ifstream f(path);
    std::string header;
    std::getline(f, header);
    CHECK(header == "x,y,h,u,v,h_plus_Z");
    double prev = -1.0;
    int rows = 0;
    std::string line;
    while (std::getline(f, line)) {
        ++rows;
        const double x = std::stod(line);
        CHECK(x >= prev);
        prev = x;
    }
    CHECK(rows > 0);
    f.close();
    std::remove(path.c_str());
}

TEST_CASE("run_case writes snapshots and sections when asked") {
    CaseConfig cfg = config_from_preset("circular_dam_flat");
    cfg.preset.mesh.nx = 8;
    cfg.preset.mesh.ny = 8;
    cfg.t_end = 0.05;
    cfg.out_dir = "/tmp/swe_test_out";
    cfg.write_vtk = true;
    SectionSpec spec;
    spec.axis = 'y';
    spec.value = 0.0;
    spec.label = "axis";
    cfg.sections.push_back(spec);
    const RunResult r = run_case(cfg);
    CHECK(r.report.checkpoints.size() == 2);
    std::ifstream snap0("/tmp/swe_test_out/circular_dam_flat_0000.vtk");
    CHECK(snap0.good());
    std::ifstream snap1("/tmp/swe_test_out/circular_dam_flat_0001.vtk");
    CHECK(snap1.good());
    std::ifstream sec("/tmp/swe_test_out/circular_dam_flat_axis_0001.csv");
    CHECK(sec.good());
    std::remove("/tmp/swe_test_out/circular_dam_flat_0000.vtk");
    std::remove("/tmp/swe_test_out/circular_dam_flat_0001.vtk");
    std::remove("/tmp/swe_test_out/circular_dam_flat_axis_0000.csv");
    std::remove("/tmp/swe_test_out/circular_dam_flat_axis_0001.csv");
}

TEST_CASE("unknown preset names fail cleanly") {
    CHECK_THROWS_AS(config_from_preset("bogus"), ConfigError);
}
