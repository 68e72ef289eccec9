#include "swe/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <queue>
#include <sstream>
#include <unordered_map>

namespace swe {

namespace {

uint64_t edge_key(int a, int b) {
    const uint64_t lo = static_cast<uint64_t>(std::min(a, b));
    const uint64_t hi = static_cast<uint64_t>(std::max(a, b));
    return (lo << 32) | hi;
}

double quad_area(Vec2 s, Vec2 r, Vec2 n, Vec2 l) {
    return 0.5 * (cross(s, r) + cross(r, n) + cross(n, l) + cross(l, s));
}

// Barycentric coordinates of p in cell c; denominator is 2*area > 0.
std::array<double, 3> barycentric(const Mesh& m, int c, Vec2 p) {
    const Vec2 a = m.nodes[m.tris[c][0]];
    const Vec2 b = m.nodes[m.tris[c][1]];
    const Vec2 d = m.nodes[m.tris[c][2]];
    const double den = cross(b - a, d - a);
    return {cross(b - p, d - p) / den, cross(d - p, a - p) / den, cross(a - p, b - p) / den};
}

bool contains(const Mesh& m, int c, Vec2 p, double tol = 1e-12) {
    const auto l = barycentric(m, c, p);
    return l[0] >= -tol && l[1] >= -tol && l[2] >= -tol;
}

}  // namespace

int Mesh::tag_id(const std::string& name) const {
    for (int i = 0; i < static_cast<int>(tag_names.size()); ++i) {
        if (tag_names[i] == name) return i;
    }
    return -1;
}

Mesh build_mesh(std::vector<Vec2> nodes, std::vector<std::array<int, 3>> tris,
                const std::map<std::pair<int, int>, std::string>& boundary_tags) {
    Mesh m;
    if (tris.empty()) throw MeshError("mesh has no triangles");
    if (nodes.size() < 3) throw MeshError("mesh has fewer than 3 nodes");
    const int nn = static_cast<int>(nodes.size());
    const int nc = static_cast<int>(tris.size());

    m.bbox_lo = m.bbox_hi = nodes[0];
    for (const Vec2& p : nodes) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw MeshError("non-finite node coordinate");
        m.bbox_lo.x = std::min(m.bbox_lo.x, p.x);
        m.bbox_lo.y = std::min(m.bbox_lo.y, p.y);
        m.bbox_hi.x = std::max(m.bbox_hi.x, p.x);
        m.bbox_hi.y = std::max(m.bbox_hi.y, p.y);
    }
    const double diag = norm(m.bbox_hi - m.bbox_lo);
    const double area_tol = 1e-14 * diag * diag;

    m.centroid.resize(nc);
    m.area.resize(nc);
    m.total_area = 0.0;
    for (int c = 0; c < nc; ++c) {
        for (int k = 0; k < 3; ++k) {
            const int v = tris[c][k];
            if (v < 0 || v >= nn) {
                throw MeshError("triangle " + std::to_string(c) + " references node " +
                                std::to_string(v) + " out of range");
            }
        }
        Vec2 a = nodes[tris[c][0]], b = nodes[tris[c][1]], d = nodes[tris[c][2]];
        double s = 0.5 * cross(b - a, d - a);
        if (s < 0.0) {
            std::swap(tris[c][1], tris[c][2]);
            std::swap(b, d);
            s = -s;
        }
        if (!(s > area_tol)) throw MeshError("degenerate triangle " + std::to_string(c));
        m.area[c] = s;
        m.total_area += s;
        m.centroid[c] = (1.0 / 3.0) * (a + b + d);
    }
    m.nodes = std::move(nodes);
    m.tris = std::move(tris);

    // ---- edge extraction ----
    std::unordered_map<uint64_t, int> emap;
    emap.reserve(static_cast<size_t>(nc) * 2);
    m.cell_edges.assign(nc, {-1, -1, -1});
    m.cell_neighbors.assign(nc, {-1, -1, -1});
    for (int c = 0; c < nc; ++c) {
        for (int k = 0; k < 3; ++k) {
            const int a = m.tris[c][k];
            const int b = m.tris[c][(k + 1) % 3];
            auto [it, inserted] = emap.try_emplace(edge_key(a, b), m.n_edges());
            if (inserted) {
                Edge e;
                e.n0 = a;
                e.n1 = b;
                e.left = c;
                m.edges.push_back(e);
            } else {
                Edge& e = m.edges[it->second];
                if (e.right != -1) {
                    throw MeshError("edge (" + std::to_string(a) + "," + std::to_string(b) +
                                    ") shared by more than two triangles");
                }
                e.right = c;
            }
            m.cell_edges[c][k] = it->second;
        }
    }

    // Normal points from the lower to the higher adjacent cell id (outward on
    // the boundary); endpoint order keeps normal = perp(p1 - p0)/len.
    m.max_edge_len = 0.0;
    for (Edge& e : m.edges) {
        if (e.right != -1 && e.left > e.right) {
            std::swap(e.left, e.right);
            std::swap(e.n0, e.n1);
        }
        const Vec2 t = m.nodes[e.n1] - m.nodes[e.n0];
        e.len = norm(t);
        if (!(e.len > 0.0)) throw MeshError("zero-length edge");
        e.normal = (1.0 / e.len) * perp(t);
        e.mid = 0.5 * (m.nodes[e.n0] + m.nodes[e.n1]);
        m.max_edge_len = std::max(m.max_edge_len, e.len);
        const Vec2 ref = e.right != -1 ? m.centroid[e.right] - m.centroid[e.left]
                                       : e.mid - m.centroid[e.left];
        if (dot(ref, e.normal) <= 0.0) {
            // triangles overlap or wind inconsistently
            throw MeshError("inconsistent edge orientation between cells " +
                            std::to_string(e.left) + " and " + std::to_string(e.right));
        }
    }
    for (int c = 0; c < nc; ++c) {
        for (int k = 0; k < 3; ++k) {
            const Edge& e = m.edges[m.cell_edges[c][k]];
            m.cell_neighbors[c][k] = e.left == c ? e.right : e.left;
        }
    }

    // ---- connectivity ----
    {
        std::vector<char> seen(nc, 0);
        std::queue<int> q;
        q.push(0);
        seen[0] = 1;
        int reached = 1;
        while (!q.empty()) {
            const int c = q.front();
            q.pop();
            for (int nb : m.cell_neighbors[c]) {
                if (nb >= 0 && !seen[nb]) {
                    seen[nb] = 1;
                    ++reached;
                    q.push(nb);
                }
            }
        }
        if (reached != nc) throw MeshError("mesh is not edge-connected");
    }

    // ---- boundary tags ----
    std::map<std::string, int> tag_ids;
    auto intern_tag = [&](const std::string& name) {
        auto [it, inserted] = tag_ids.try_emplace(name, static_cast<int>(m.tag_names.size()));
        if (inserted) m.tag_names.push_back(name);
        return it->second;
    };
    for (const auto& [pair, name] : boundary_tags) {
        const auto it = emap.find(edge_key(pair.first, pair.second));
        if (it == emap.end()) {
            throw MeshError("tagged edge (" + std::to_string(pair.first) + "," +
                            std::to_string(pair.second) + ") does not exist");
        }
        Edge& e = m.edges[it->second];
        if (e.right != -1) {
            throw MeshError("tagged edge (" + std::to_string(pair.first) + "," +
                            std::to_string(pair.second) + ") is not a boundary edge");
        }
        e.tag = intern_tag(name);
    }
    for (int i = 0; i < m.n_edges(); ++i) {
        Edge& e = m.edges[i];
        if (e.right == -1) {
            if (e.tag < 0) e.tag = intern_tag("untagged");
            e.bidx = static_cast<int>(m.boundary_edges.size());
            m.boundary_edges.push_back(i);
        }
    }

    // ---- diamond co-volumes ----
    for (Edge& e : m.edges) {
        const Vec2 l = m.centroid[e.left];
        if (e.right != -1) {
            e.rpos = m.centroid[e.right];
        } else {
            e.rpos = l + (2.0 * dot(e.mid - l, e.normal)) * e.normal;
        }
        const double mu = quad_area(m.nodes[e.n0], e.rpos, m.nodes[e.n1], l);
        if (!(mu > area_tol)) {
            throw MeshError("degenerate diamond at edge (" + std::to_string(e.n0) + "," +
                            std::to_string(e.n1) + ")");
        }
        e.inv2mu = 1.0 / (2.0 * mu);
        e.d_rl = perp(e.rpos - l);
    }

    // ---- vertex fans ----
    {
        std::vector<int> count(nn, 0);
        for (int c = 0; c < nc; ++c) {
            for (int v : m.tris[c]) ++count[v];
        }
        m.vert_ptr.assign(nn + 1, 0);
        for (int v = 0; v < nn; ++v) m.vert_ptr[v + 1] = m.vert_ptr[v] + count[v];
        m.vert_cell.assign(m.vert_ptr[nn], -1);
        std::vector<int> fill(m.vert_ptr.begin(), m.vert_ptr.end() - 1);
        for (int c = 0; c < nc; ++c) {
            for (int v : m.tris[c]) m.vert_cell[fill[v]++] = c;
        }
        m.vert_w.assign(m.vert_cell.size(), 0.0);
        for (int v = 0; v < nn; ++v) {
            double sum = 0.0;
            for (int k = m.vert_ptr[v]; k < m.vert_ptr[v + 1]; ++k) {
                const double d = norm(m.nodes[v] - m.centroid[m.vert_cell[k]]);
                m.vert_w[k] = 1.0 / d;
                sum += m.vert_w[k];
            }
            for (int k = m.vert_ptr[v]; k < m.vert_ptr[v + 1]; ++k) m.vert_w[k] /= sum;
        }
    }

    // ---- per-edge stencils: the diamond (adjacent cells, then the endpoints) ----
    m.sten_ptr.assign(m.n_edges() + 1, 0);
    std::vector<int> cells;
    for (int i = 0; i < m.n_edges(); ++i) {
        const Edge& e = m.edges[i];
        cells.clear();
        cells.push_back(e.left);
        if (e.right >= 0) cells.push_back(e.right);
        for (int c : cells) m.sten.push_back({MemberKind::Cell, c});
        m.sten.push_back({MemberKind::Node, e.n0});
        m.sten.push_back({MemberKind::Node, e.n1});
        m.sten_ptr[i + 1] = static_cast<int>(m.sten.size());
    }

    // ---- per-cell stencils: self, edge neighbors, own vertices ----
    m.cell_sten_ptr.assign(nc + 1, 0);
    for (int c = 0; c < nc; ++c) {
        m.cell_sten.push_back({MemberKind::Cell, c});
        std::array<int, 3> nb = m.cell_neighbors[c];
        std::sort(nb.begin(), nb.end());
        for (int b : nb) {
            if (b >= 0) m.cell_sten.push_back({MemberKind::Cell, b});
        }
        for (int v : m.tris[c]) m.cell_sten.push_back({MemberKind::Node, v});
        m.cell_sten_ptr[c + 1] = static_cast<int>(m.cell_sten.size());
    }

    return m;
}

Mesh generate_rect_mesh(double x0, double y0, double x1, double y1, int nx, int ny,
                        DiagonalPattern pattern) {
    if (!(x1 > x0) || !(y1 > y0)) throw MeshError("rect mesh: empty box");
    if (nx < 1 || ny < 1) throw MeshError("rect mesh: nx and ny must be >= 1");
    const double dx = (x1 - x0) / nx;
    const double dy = (y1 - y0) / ny;
    if (pattern == DiagonalPattern::Offset) {
        // Staggered node rows: odd rows shift by dx/2 and keep clamped wall
        // nodes, so side walls stay straight while the interior triangles are
        // near-equilateral. Each strip between consecutive rows is
        // triangulated by a merge walk that always advances the row whose
        // next node is nearer in x (the short-diagonal choice).
        std::vector<std::vector<int>> row(static_cast<size_t>(ny) + 1);
        std::vector<Vec2> nodes;
        nodes.reserve(static_cast<size_t>(nx + 2) * (ny + 1));
        for (int j = 0; j <= ny; ++j) {
            const double y = j == ny ? y1 : y0 + j * dy;
            std::vector<double> xs;
            if ((j & 1) == 0) {
                for (int i = 0; i <= nx; ++i) xs.push_back(i == nx ? x1 : x0 + i * dx);
            } else {
                xs.push_back(x0);
                for (int i = 1; i <= nx; ++i) xs.push_back(x0 + (i - 0.5) * dx);
                xs.push_back(x1);
            }
            for (const double x : xs) {
                row[j].push_back(static_cast<int>(nodes.size()));
                nodes.push_back({x, y});
            }
        }
        std::vector<std::array<int, 3>> tris;
        tris.reserve(static_cast<size_t>(ny) * (2 * nx + 1));
        for (int j = 0; j < ny; ++j) {
            const std::vector<int>& lo = row[j];
            const std::vector<int>& hi = row[j + 1];
            size_t i = 0, k = 0;
            while (i + 1 < lo.size() || k + 1 < hi.size()) {
                const bool step_lo =
                    k + 1 == hi.size() ||
                    (i + 1 < lo.size() && nodes[lo[i + 1]].x <= nodes[hi[k + 1]].x);
                if (step_lo) {
                    tris.push_back({lo[i], lo[i + 1], hi[k]});
                    ++i;
                } else {
                    tris.push_back({lo[i], hi[k + 1], hi[k]});
                    ++k;
                }
            }
        }
        std::map<std::pair<int, int>, std::string> tags;
        for (int j = 0; j < ny; ++j) {
            tags[{row[j].front(), row[j + 1].front()}] = "left";
            tags[{row[j].back(), row[j + 1].back()}] = "right";
        }
        for (size_t i = 0; i + 1 < row[0].size(); ++i) {
            tags[{row[0][i], row[0][i + 1]}] = "bottom";
        }
        for (size_t i = 0; i + 1 < row[ny].size(); ++i) {
            tags[{row[ny][i], row[ny][i + 1]}] = "top";
        }
        return build_mesh(std::move(nodes), std::move(tris), tags);
    }
    std::vector<Vec2> nodes;
    nodes.reserve(static_cast<size_t>(nx + 1) * (ny + 1));
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            nodes.push_back({i == nx ? x1 : x0 + i * dx, j == ny ? y1 : y0 + j * dy});
        }
    }
    auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
    std::vector<std::array<int, 3>> tris;
    tris.reserve(static_cast<size_t>(nx) * ny * 2);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int a = vid(i, j), b = vid(i + 1, j), c = vid(i, j + 1), d = vid(i + 1, j + 1);
            const bool main_diag = pattern == DiagonalPattern::Fixed || ((i + j) & 1) == 0;
            if (main_diag) {
                tris.push_back({a, b, d});
                tris.push_back({a, d, c});
            } else {
                tris.push_back({a, b, c});
                tris.push_back({b, d, c});
            }
        }
    }
    std::map<std::pair<int, int>, std::string> tags;
    for (int j = 0; j < ny; ++j) {
        tags[{vid(0, j), vid(0, j + 1)}] = "left";
        tags[{vid(nx, j), vid(nx, j + 1)}] = "right";
    }
    for (int i = 0; i < nx; ++i) {
        tags[{vid(i, 0), vid(i + 1, 0)}] = "bottom";
        tags[{vid(i, ny), vid(i + 1, ny)}] = "top";
    }
    return build_mesh(std::move(nodes), std::move(tris), tags);
}

Mesh generate_masked_mesh(const std::vector<double>& x_ticks, const std::vector<double>& y_ticks,
                          const std::function<bool(Vec2)>& keep) {
    const int nx = static_cast<int>(x_ticks.size()) - 1;
    const int ny = static_cast<int>(y_ticks.size()) - 1;
    if (nx < 1 || ny < 1) throw MeshError("masked mesh: need at least 2 ticks per axis");
    for (int i = 0; i < nx; ++i) {
        if (!(x_ticks[i + 1] > x_ticks[i])) throw MeshError("masked mesh: x ticks not increasing");
    }
    for (int j = 0; j < ny; ++j) {
        if (!(y_ticks[j + 1] > y_ticks[j])) throw MeshError("masked mesh: y ticks not increasing");
    }
    std::vector<int> node_id(static_cast<size_t>(nx + 1) * (ny + 1), -1);
    auto lid = [nx](int i, int j) { return j * (nx + 1) + i; };
    std::vector<Vec2> nodes;
    std::vector<std::array<int, 3>> tris;
    auto use_node = [&](int i, int j) {
        int& id = node_id[lid(i, j)];
        if (id < 0) {
            id = static_cast<int>(nodes.size());
            nodes.push_back({x_ticks[i], y_ticks[j]});
        }
        return id;
    };
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const Vec2 center{0.5 * (x_ticks[i] + x_ticks[i + 1]), 0.5 * (y_ticks[j] + y_ticks[j + 1])};
            if (!keep(center)) continue;
            const int a = use_node(i, j), b = use_node(i + 1, j);
            const int c = use_node(i, j + 1), d = use_node(i + 1, j + 1);
            if (((i + j) & 1) == 0) {
                tris.push_back({a, b, d});
                tris.push_back({a, d, c});
            } else {
                tris.push_back({a, b, c});
                tris.push_back({b, d, c});
            }
        }
    }
    if (tris.empty()) throw MeshError("masked mesh: predicate kept no cells");

    // every boundary edge (seen once) is a wall
    std::unordered_map<uint64_t, int> seen;
    for (const auto& t : tris) {
        for (int k = 0; k < 3; ++k) ++seen[edge_key(t[k], t[(k + 1) % 3])];
    }
    std::map<std::pair<int, int>, std::string> tags;
    for (const auto& t : tris) {
        for (int k = 0; k < 3; ++k) {
            const int a = t[k], b = t[(k + 1) % 3];
            if (seen[edge_key(a, b)] == 1) tags[{std::min(a, b), std::max(a, b)}] = "wall";
        }
    }
    return build_mesh(std::move(nodes), std::move(tris), tags);
}

Mesh build_from_recipe(const MeshRecipe& r) {
    if (!r.file.empty()) return read_mesh_file(r.file);
    if (!r.x_ticks.empty() || !r.y_ticks.empty()) {
        return generate_masked_mesh(r.x_ticks, r.y_ticks, r.keep ? r.keep : [](Vec2) { return true; });
    }
    return generate_rect_mesh(r.x0, r.y0, r.x1, r.y1, r.nx, r.ny, r.pattern);
}

// ---- mesh file I/O ----

namespace {

struct LineReader {
    std::istream& in;
    std::string path;
    int line_no = 0;
    std::istringstream cur;

    // advance to the next non-empty line (comments stripped); false at EOF
    bool next_line() {
        std::string line;
        while (std::getline(in, line)) {
            ++line_no;
            const auto h = line.find('#');
            if (h != std::string::npos) line.erase(h);
            bool blank = true;
            for (char ch : line) {
                if (!std::isspace(static_cast<unsigned char>(ch))) {
                    blank = false;
                    break;
                }
            }
            if (blank) continue;
            cur = std::istringstream(line);
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw MeshError(path + ":" + std::to_string(line_no) + ": " + what);
    }

    template <class T>
    T get(const char* what) {
        T v;
        if (!(cur >> v)) fail(std::string("expected ") + what);
        return v;
    }
};

}  // namespace

Mesh read_mesh_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open mesh file " + path);
    LineReader r{in, path, 0, {}};

    if (!r.next_line()) throw MeshError(path + ": empty mesh file");
    const int nn = r.get<int>("node count");
    const int nt = r.get<int>("triangle count");
    const int nb = r.get<int>("boundary edge count");
    if (nn < 3 || nt < 1 || nb < 0) r.fail("invalid counts in header");

    std::vector<Vec2> nodes(nn);
    for (int i = 0; i < nn; ++i) {
        if (!r.next_line()) r.fail("unexpected end of file in node block");
        nodes[i].x = r.get<double>("node x");
        nodes[i].y = r.get<double>("node y");
    }
    std::vector<std::array<int, 3>> tris(nt);
    for (int i = 0; i < nt; ++i) {
        if (!r.next_line()) r.fail("unexpected end of file in triangle block");
        for (int k = 0; k < 3; ++k) tris[i][k] = r.get<int>("triangle node id");
        for (int k = 0; k < 3; ++k) {
            if (tris[i][k] < 0 || tris[i][k] >= nn) r.fail("triangle node id out of range");
        }
    }
    std::map<std::pair<int, int>, std::string> tags;
    for (int i = 0; i < nb; ++i) {
        if (!r.next_line()) r.fail("unexpected end of file in boundary block");
        const int a = r.get<int>("boundary node id");
        const int b = r.get<int>("boundary node id");
        const std::string tag = r.get<std::string>("boundary tag");
        if (a < 0 || a >= nn || b < 0 || b >= nn) r.fail("boundary node id out of range");
        tags[{std::min(a, b), std::max(a, b)}] = tag;
    }
    return build_mesh(std::move(nodes), std::move(tris), tags);
}

void write_mesh_file(const Mesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write mesh file " + path);
    char buf[80];
    out << mesh.n_nodes() << ' ' << mesh.n_cells() << ' ' << mesh.boundary_edges.size() << '\n';
    for (const Vec2& p : mesh.nodes) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g\n", p.x, p.y);
        out << buf;
    }
    for (const auto& t : mesh.tris) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    for (int e : mesh.boundary_edges) {
        const Edge& ed = mesh.edges[e];
        out << ed.n0 << ' ' << ed.n1 << ' ' << mesh.tag_names[ed.tag] << '\n';
    }
    if (!out) throw IoError("failed writing mesh file " + path);
}

// ---- point location ----

namespace {

// resolve shared-edge hits to the lowest containing cell id
int tie_break(const Mesh& m, int c, Vec2 p) {
    int best = c;
    for (int nb : m.cell_neighbors[c]) {
        if (nb >= 0 && nb < best && contains(m, nb, p)) best = nb;
    }
    return best;
}

int exhaustive_locate(const Mesh& m, Vec2 p) {
    for (int c = 0; c < m.n_cells(); ++c) {
        if (contains(m, c, p)) return tie_break(m, c, p);
    }
    return -1;
}

}  // namespace

int locate_point(const Mesh& mesh, Vec2 p, int hint) {
    int c = hint >= 0 && hint < mesh.n_cells() ? hint : 0;
    for (int step = 0; step <= mesh.n_cells(); ++step) {
        const auto l = barycentric(mesh, c, p);
        int worst = 0;
        if (l[1] < l[worst]) worst = 1;
        if (l[2] < l[worst]) worst = 2;
        if (l[worst] >= -1e-12) return tie_break(mesh, c, p);
        // cross the edge opposite the most negative vertex
        const int nb = mesh.cell_neighbors[c][(worst + 1) % 3];
        if (nb < 0) return exhaustive_locate(mesh, p);  // left through a wall (or non-convex pocket)
        c = nb;
    }
    return exhaustive_locate(mesh, p);
}

}  // namespace swe
