#include "swe/driver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace swe {

namespace {

std::string full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_scalar(std::ofstream& f, const std::string& name, const std::vector<double>& v) {
    f << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (const double x : v) f << full(x) << '\n';
}

}  // namespace

void write_vtk_snapshot(const Mesh& mesh, const State& st, const Bed& bed,
                        const std::string& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << "# vtk DataFile Version 3.0\n";
    f << "shallow water fields t=" << full(st.t) << "\n";
    f << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
    f << "POINTS " << mesh.n_nodes() << " double\n";
    for (const Vec2& p : mesh.nodes) f << full(p.x) << ' ' << full(p.y) << " 0\n";
    f << "CELLS " << mesh.n_cells() << ' ' << 4 * mesh.n_cells() << '\n';
    for (const auto& t : mesh.tris) f << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    f << "CELL_TYPES " << mesh.n_cells() << '\n';
    for (int c = 0; c < mesh.n_cells(); ++c) f << "5\n";
    f << "CELL_DATA " << mesh.n_cells() << '\n';
    write_scalar(f, "h", st.h);
    write_scalar(f, "hu", st.hu);
    write_scalar(f, "hv", st.hv);
    write_scalar(f, "Z", bed.z_cell);
    std::vector<double> surf(mesh.n_cells());
    for (int c = 0; c < mesh.n_cells(); ++c) surf[c] = st.h[c] + bed.z_cell[c];
    write_scalar(f, "h_plus_Z", surf);
    f.flush();
    if (!f) throw IoError("write failed for '" + path + "'");
}

VtkSnapshot read_vtk_snapshot(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open '" + path + "'");
    auto fail = [&path](const std::string& what) -> IoError {
        return IoError("malformed snapshot '" + path + "': " + what);
    };

    std::string line;
    std::getline(f, line);  // version banner
    std::getline(f, line);  // title
    VtkSnapshot snap;
    std::string word;
    long n = 0;
    while (f >> word) {
        if (word == "POINTS") {
            std::string type;
            if (!(f >> n >> type)) throw fail("bad POINTS header");
            snap.points.resize(n);
            for (long i = 0; i < n; ++i) {
                double z;
                if (!(f >> snap.points[i].x >> snap.points[i].y >> z)) {
                    throw fail("short POINTS block");
                }
            }
        } else if (word == "CELLS") {
            long total;
            if (!(f >> n >> total)) throw fail("bad CELLS header");
            snap.tris.resize(n);
            for (long i = 0; i < n; ++i) {
                int k;
                if (!(f >> k) || k != 3) throw fail("only triangle cells are supported");
                if (!(f >> snap.tris[i][0] >> snap.tris[i][1] >> snap.tris[i][2])) {
                    throw fail("short CELLS block");
                }
            }
        } else if (word == "CELL_TYPES") {
            if (!(f >> n)) throw fail("bad CELL_TYPES header");
            for (long i = 0; i < n; ++i) {
                int t;
                if (!(f >> t) || t != 5) throw fail("only triangle cells are supported");
            }
        } else if (word == "CELL_DATA") {
            if (!(f >> n)) throw fail("bad CELL_DATA header");
        } else if (word == "SCALARS") {
            std::string name, type, tok;
            if (!(f >> name >> type >> tok)) throw fail("bad SCALARS header");
            int comps = 1;
            if (tok != "LOOKUP_TABLE") {
                try {
                    comps = std::stoi(tok);
                } catch (const std::exception&) {
                    throw fail("bad SCALARS component count '" + tok + "'");
                }
                if (!(f >> tok) || tok != "LOOKUP_TABLE") throw fail("missing LOOKUP_TABLE");
            }
            std::string tag;
            if (!(f >> tag)) throw fail("missing LOOKUP_TABLE name");
            std::vector<double>& v = snap.cell_data[name];
            v.resize(n * comps);
            for (double& x : v) {
                if (!(f >> x)) throw fail("short SCALARS block for '" + name + "'");
            }
        } else if (word == "ASCII" || word == "DATASET" || word == "UNSTRUCTURED_GRID") {
            // harmless structural tokens
        } else if (word == "BINARY") {
            throw fail("binary snapshots are not supported");
        } else {
            std::getline(f, line);  // skip unknown directives
        }
    }
    if (snap.points.empty() || snap.tris.empty()) throw fail("no geometry found");
    return snap;
}

void write_cross_section(const Mesh& mesh, const State& st, const Bed& bed,
                         const SectionSpec& spec, const std::string& path) {
    if (spec.axis != 'x' && spec.axis != 'y') {
        throw ConfigError("cross-section axis must be 'x' or 'y'");
    }
    const double band = spec.band > 0.0 ? spec.band : 0.5 * mesh.max_edge_len;
    std::vector<int> picked;
    for (int c = 0; c < mesh.n_cells(); ++c) {
        const double off = (spec.axis == 'x' ? mesh.centroid[c].x : mesh.centroid[c].y) -
                           spec.value;
        if (std::abs(off) <= band) picked.push_back(c);
    }
    auto along = [&](int c) { return spec.axis == 'x' ? mesh.centroid[c].y : mesh.centroid[c].x; };
    std::sort(picked.begin(), picked.end(), [&](int a, int b) {
        if (along(a) != along(b)) return along(a) < along(b);
        return a < b;
    });

    std::ofstream f(path);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << "x,y,h,u,v,h_plus_Z\n";
    for (const int c : picked) {
        const double h = st.h[c];
        f << full(mesh.centroid[c].x) << ',' << full(mesh.centroid[c].y) << ',' << full(h)
          << ',' << full(st.hu[c] / h) << ',' << full(st.hv[c] / h) << ','
          << full(h + bed.z_cell[c]) << '\n';
    }
    f.flush();
    if (!f) throw IoError("write failed for '" + path + "'");
}

}  // namespace swe
