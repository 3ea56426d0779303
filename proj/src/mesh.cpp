#include "expander/mesh.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

namespace expander {

namespace {

uint64_t edge_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (uint64_t(uint32_t(a)) << 32) | uint32_t(b);
}

struct UnionFind {
    std::vector<int> p;
    explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) {
        while (p[x] != x) x = p[x] = p[p[x]];
        return x;
    }
    void unite(int a, int b) { p[find(a)] = find(b); }
};

}  // namespace

Topology build_topology(const TriMesh& mesh) {
    Topology t;
    const int n = static_cast<int>(mesh.V.size());
    t.num_vertices = n;
    t.vertex_faces.assign(n, {});
    t.used_vertex.assign(n, 0);
    std::unordered_map<uint64_t, int> eid;
    eid.reserve(mesh.F.size() * 2);
    // directed half-edge owner, to check orientation
    std::unordered_map<uint64_t, int> directed;
    directed.reserve(mesh.F.size() * 3);
    t.face_edges.resize(mesh.F.size());
    for (size_t f = 0; f < mesh.F.size(); ++f) {
        const auto& tri = mesh.F[f];
        for (int c = 0; c < 3; ++c) {
            if (tri[c] < 0 || tri[c] >= n) throw Error(ErrorKind::TopologyError, "face index out of range");
            t.vertex_faces[tri[c]].push_back(static_cast<int>(f));
            t.used_vertex[tri[c]] = 1;
        }
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
            throw Error(ErrorKind::TopologyError, "degenerate face " + std::to_string(f));
        for (int c = 0; c < 3; ++c) {
            int a = tri[(c + 1) % 3], b = tri[(c + 2) % 3];
            uint64_t dk = (uint64_t(uint32_t(a)) << 32) | uint32_t(b);
            if (!directed.emplace(dk, static_cast<int>(f)).second)
                throw Error(ErrorKind::TopologyError,
                            "inconsistent orientation or non-manifold edge (" + std::to_string(a) + "," + std::to_string(b) + ")");
            uint64_t k = edge_key(a, b);
            auto it = eid.find(k);
            int e;
            if (it == eid.end()) {
                e = static_cast<int>(t.edges.size());
                eid.emplace(k, e);
                t.edges.push_back({std::min(a, b), std::max(a, b)});
                t.edge_faces.push_back({static_cast<int>(f), -1});
            } else {
                e = it->second;
                if (t.edge_faces[e][1] >= 0) throw Error(ErrorKind::TopologyError, "edge shared by more than two faces");
                t.edge_faces[e][1] = static_cast<int>(f);
            }
            t.face_edges[f][c] = e;
        }
    }
    t.vertex_neighbors.assign(n, {});
    for (const auto& e : t.edges) {
        t.vertex_neighbors[e[0]].push_back(e[1]);
        t.vertex_neighbors[e[1]].push_back(e[0]);
    }
    for (auto& nb : t.vertex_neighbors) std::sort(nb.begin(), nb.end());

    // boundary half-edges follow the face orientation
    t.boundary_vertex.assign(n, 0);
    std::multimap<int, int> next;
    for (size_t f = 0; f < mesh.F.size(); ++f) {
        const auto& tri = mesh.F[f];
        for (int c = 0; c < 3; ++c) {
            int e = t.face_edges[f][c];
            if (!t.is_boundary_edge(e)) continue;
            int a = tri[(c + 1) % 3], b = tri[(c + 2) % 3];
            next.emplace(a, b);
            t.boundary_vertex[a] = t.boundary_vertex[b] = 1;
        }
    }
    while (!next.empty()) {
        auto it = next.begin();
        int start = it->first;
        std::vector<int> loop{start};
        int cur = it->second;
        next.erase(it);
        while (cur != start) {
            loop.push_back(cur);
            auto jt = next.find(cur);
            if (jt == next.end()) throw Error(ErrorKind::TopologyError, "open boundary chain");
            cur = jt->second;
            next.erase(jt);
        }
        t.boundary_loops.push_back(std::move(loop));
    }

    UnionFind uf(n);
    for (const auto& tri : mesh.F) {
        uf.unite(tri[0], tri[1]);
        uf.unite(tri[1], tri[2]);
    }
    t.component.assign(n, -1);
    std::unordered_map<int, int> root_id;
    for (int v = 0; v < n; ++v) {
        if (!t.used_vertex[v]) {
            ++t.num_isolated;
            continue;
        }
        int r = uf.find(v);
        auto it = root_id.find(r);
        if (it == root_id.end()) it = root_id.emplace(r, t.num_components++).first;
        t.component[v] = it->second;
    }
    return t;
}

std::vector<EulerInfo> component_euler(const TriMesh& mesh) {
    Topology t = build_topology(mesh);
    std::vector<EulerInfo> out(t.num_components);
    for (int v = 0; v < t.num_vertices; ++v)
        if (t.component[v] >= 0) out[t.component[v]].chi += 1;
    for (const auto& e : t.edges) out[t.component[e[0]]].chi -= 1;
    for (const auto& f : mesh.F) out[t.component[f[0]]].chi += 1;
    for (const auto& l : t.boundary_loops) out[t.component[l[0]]].b += 1;
    for (auto& c : out) {
        int twice = 2 - c.chi - c.b;
        if (twice % 2 != 0 || twice < 0)
            throw Error(ErrorKind::TopologyError, "2 - chi - b is odd or negative; mesh is broken or non-orientable");
        c.g = twice / 2;
        c.components = 1;
    }
    return out;
}

EulerInfo euler_and_genus(const TriMesh& mesh) {
    Topology t = build_topology(mesh);
    if (t.num_isolated > 0) spdlog::warn("mesh has {} isolated vertices; excluded from chi", t.num_isolated);
    auto comps = component_euler(mesh);
    EulerInfo tot;
    tot.chi = 0;
    tot.components = static_cast<int>(comps.size());
    tot.isolated = t.num_isolated;
    for (const auto& c : comps) {
        tot.chi += c.chi;
        tot.b += c.b;
        tot.g += c.g;
    }
    if (comps.size() > 1) spdlog::warn("mesh has {} components; genus is the sum over components", comps.size());
    return tot;
}

SliceResult slice_y0(const TriMesh& mesh) {
    Topology t = build_topology(mesh);
    SliceResult res;
    const int n = static_cast<int>(mesh.V.size());
    std::vector<int> side(n);
    for (int v = 0; v < n; ++v) {
        double y = mesh.V[v].y();
        if (std::abs(y) <= 1e-12) {
            side[v] = 1;
            if (t.used_vertex[v]) ++res.perturbed_vertices;
        } else {
            side[v] = y > 0 ? 1 : -1;
        }
    }
    if (res.perturbed_vertices > 0)
        spdlog::debug("slice: {} vertices on the plane treated as y>0", res.perturbed_vertices);

    const int ne = static_cast<int>(t.edges.size());
    std::vector<int> node(ne, -1);
    std::vector<Vec3> pts;
    std::vector<char> on_boundary;
    for (int e = 0; e < ne; ++e) {
        int a = t.edges[e][0], b = t.edges[e][1];
        if (side[a] == side[b]) continue;
        double ya = side[a] > 0 ? std::max(mesh.V[a].y(), 0.0) : mesh.V[a].y();
        double yb = side[b] > 0 ? std::max(mesh.V[b].y(), 0.0) : mesh.V[b].y();
        double s = ya / (ya - yb);
        node[e] = static_cast<int>(pts.size());
        pts.push_back(mesh.V[a] + s * (mesh.V[b] - mesh.V[a]));
        on_boundary.push_back(t.is_boundary_edge(e) ? 1 : 0);
    }
    const int np = static_cast<int>(pts.size());
    std::vector<std::vector<int>> adj(np);
    for (size_t f = 0; f < mesh.F.size(); ++f) {
        int c[2], m = 0;
        for (int j = 0; j < 3; ++j) {
            int nd = node[t.face_edges[f][j]];
            if (nd >= 0 && m < 2) c[m++] = nd;
        }
        if (m == 2) {
            adj[c[0]].push_back(c[1]);
            adj[c[1]].push_back(c[0]);
        }
    }
    std::vector<char> seen(np, 0);
    auto walk = [&](int start, bool closed) {
        SliceCurve cur;
        cur.closed = closed;
        int prev = -1, v = start;
        while (true) {
            seen[v] = 1;
            cur.pts.push_back(pts[v]);
            int nxt = -1;
            for (int w : adj[v])
                if (w != prev && !seen[w]) {
                    nxt = w;
                    break;
                }
            if (nxt < 0) break;
            prev = v;
            v = nxt;
        }
        res.curves.push_back(std::move(cur));
    };
    for (int v = 0; v < np; ++v)
        if (!seen[v] && adj[v].size() <= 1) walk(v, false);
    for (int v = 0; v < np; ++v)
        if (!seen[v]) walk(v, true);
    return res;
}

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) { return 0.5 * (b - a).cross(c - a).norm(); }

double triangle_quality(const Vec3& a, const Vec3& b, const Vec3& c) {
    double s = (b - a).squaredNorm() + (c - b).squaredNorm() + (a - c).squaredNorm();
    if (s <= 0) return 0.0;
    return 4.0 * std::sqrt(3.0) * triangle_area(a, b, c) / s;
}

double min_triangle_quality(const TriMesh& m) {
    double q = 1.0;
    for (const auto& f : m.F) q = std::min(q, triangle_quality(m.V[f[0]], m.V[f[1]], m.V[f[2]]));
    return q;
}

double mean_edge_length(const TriMesh& m) {
    double s = 0;
    size_t c = 0;
    for (const auto& f : m.F)
        for (int j = 0; j < 3; ++j) {
            s += (m.V[f[j]] - m.V[f[(j + 1) % 3]]).norm();
            ++c;
        }
    return c ? s / c : 0.0;
}

double euclidean_area(const TriMesh& m) {
    double s = 0;
    for (const auto& f : m.F) s += triangle_area(m.V[f[0]], m.V[f[1]], m.V[f[2]]);
    return s;
}

TriMesh make_octahedron() {
    TriMesh m;
    m.V = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    m.F = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4}, {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
    m.ensure_tags();
    return m;
}

TriMesh make_polar_disk(double R, int rings, int sectors0, const Vec3& center, int boundary_curve) {
    // ring j has sectors0*j vertices; consecutive rings zipped
    TriMesh m;
    m.add_vertex(center);
    std::vector<std::vector<int>> ring(rings + 1);
    ring[0] = {0};
    for (int j = 1; j <= rings; ++j) {
        int nj = sectors0 * j;
        double r = R * j / rings;
        for (int i = 0; i < nj; ++i) {
            double th = 2.0 * kPi * i / nj;
            VertexTag tag;
            if (j == rings) {
                tag.curve = boundary_curve;
                tag.param = th;
            }
            ring[j].push_back(m.add_vertex(center + Vec3(r * std::cos(th), r * std::sin(th), 0.0), tag));
        }
    }
    for (int i = 0; i < sectors0; ++i) m.F.push_back({0, ring[1][i], ring[1][(i + 1) % sectors0]});
    for (int j = 1; j < rings; ++j) {
        const auto& a = ring[j];
        const auto& b = ring[j + 1];
        int na = static_cast<int>(a.size()), nb = static_cast<int>(b.size());
        int ia = 0, ib = 0;
        // advance along both rings by angle
        while (ia < na || ib < nb) {
            double ta = 2.0 * kPi * (ia + 1) / na;
            double tb = 2.0 * kPi * (ib + 1) / nb;
            if (ib < nb && (ia >= na || tb <= ta)) {
                m.F.push_back({a[ia % na], b[ib], b[(ib + 1) % nb]});
                ++ib;
            } else {
                m.F.push_back({a[ia], b[ib % nb], a[(ia + 1) % na]});
                ++ia;
            }
        }
    }
    return m;
}

void flip_orientation(TriMesh& m) {
    for (auto& f : m.F) std::swap(f[1], f[2]);
}

void append_mesh(TriMesh& a, const TriMesh& b) {
    int off = static_cast<int>(a.V.size());
    a.ensure_tags();
    for (size_t i = 0; i < b.V.size(); ++i) a.add_vertex(b.V[i], i < b.tags.size() ? b.tags[i] : VertexTag{});
    for (auto f : b.F) a.F.push_back({f[0] + off, f[1] + off, f[2] + off});
}

TriMesh transform_mesh(const TriMesh& m, const Mat3& A, bool flip_faces) {
    TriMesh out = m;
    for (auto& v : out.V) v = A * v;
    if (flip_faces) flip_orientation(out);
    return out;
}

}  // namespace expander
