#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "swe/corrector.hpp"
#include "swe/fields.hpp"
#include "swe/mesh.hpp"
#include "swe/model.hpp"
#include "swe/oracles.hpp"

namespace swe {

// A requested cross-section line: axis 'x' means the line x = value (sampled
// along y), axis 'y' the line y = value; cells whose centroid lies within
// `band` of the line are exported.
struct SectionSpec {
    char axis = 'y';
    double value = 0.0;
    double band = 0.0;  // 0 -> auto: half the maximum edge length
    std::string label;
};

// Fully resolved run description. Built from a preset and optionally
// overridden by an INI-style config file.
struct CaseConfig {
    CasePreset preset;
    double t_end = -1.0;       // <0 -> preset value
    double output_every = 0.0;  // 0 -> final checkpoint only
    std::string out_dir;        // empty -> no files written
    bool write_vtk = false;
    std::vector<SectionSpec> sections;
};

// INI-style config: sections [case], [mesh], [params], [boundary], [sections].
// '#' and ';' start comments. Errors carry file:line context.
CaseConfig parse_config_file(const std::string& path);
CaseConfig config_from_preset(const std::string& name);

struct Checkpoint {
    double t = 0.0;
    long steps = 0;          // steps taken since the previous checkpoint
    double dt_min = 0.0, dt_max = 0.0;
    double mass = 0.0, energy = 0.0;
    double h_min = 0.0, h_max = 0.0;
    double surf_min = 0.0, surf_max = 0.0;
    double u_max = 0.0;
    // vs the preset oracle when present; negative when unavailable
    double err_l1_h = -1.0, err_l1_hu = -1.0, err_linf_h = -1.0;
    long clamped_feet = 0, lsm_fallbacks = 0, source_fallbacks = 0;
    bool energy_drift_flag = false;  // energy grew > 1% above the initial value
};

struct RunReport {
    std::vector<Checkpoint> checkpoints;
    double wall_seconds = 0.0;  // never serialized: reports must be deterministic
};

struct RunResult {
    Mesh mesh;
    Bed bed;
    State state;
    RunReport report;
};

// Time loop: adaptive dt clipped to land exactly on checkpoints and the end
// time; writes snapshots/sections under cfg.out_dir when set.
RunResult run_case(const CaseConfig& cfg);

// Deterministic text serialization (excludes wall time).
void write_report(const RunReport& report, std::ostream& os);

struct StudyRow {
    int nx = 0;
    int cells = 0;
    double max_edge = 0.0;
    double err_l1_h = -1.0, err_l1_hu = -1.0;
    double order = 0.0;  // NaN on the first row
    double seconds = 0.0;
};

// Runs the case on a ladder of mesh resolutions (nx values; ny scales with the
// preset aspect ratio) and reports errors plus observed orders
// log(e_k/e_{k+1}) / log(s_k/s_{k+1}) with s = max edge length.
std::vector<StudyRow> convergence_study(const CaseConfig& base, const std::vector<int>& nx_list,
                                        std::ostream* log = nullptr);
void write_study(const std::vector<StudyRow>& rows, std::ostream& os);

// Legacy ASCII VTK unstructured-grid snapshot with cell data h, hu, hv, Z,
// h_plus_Z; values printed with enough digits to round-trip exactly.
void write_vtk_snapshot(const Mesh& mesh, const State& st, const Bed& bed,
                        const std::string& path);

struct VtkSnapshot {
    std::vector<Vec2> points;
    std::vector<std::array<int, 3>> tris;
    std::map<std::string, std::vector<double>> cell_data;
};
VtkSnapshot read_vtk_snapshot(const std::string& path);

// CSV `x,y,h,u,v,h_plus_Z` of cells within the section band, sorted along the
// line direction.
void write_cross_section(const Mesh& mesh, const State& st, const Bed& bed,
                         const SectionSpec& spec, const std::string& path);

}  // namespace swe
