#include "expander/seeds.hpp"
#include "expander/foliation.hpp"
#include "expander/spatial_hash.hpp"
#include "expander/symmetry.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <unordered_map>

namespace expander {

namespace {

Vec3 lift(const Vec2& p) { return Vec3(p.x(), p.y(), 0.0); }

// merges coincident points of several planar meshes
PlanarMesh merge_planar(const std::vector<PlanarMesh>& parts, double tol) {
    PlanarMesh out;
    std::vector<Vec3> pts;
    for (const auto& m : parts)
        for (const auto& p : m.P) pts.push_back(lift(p));
    SpatialHash hash(pts, std::max(10 * tol, 1e-9));
    std::vector<int> rep(pts.size(), -1);
    std::vector<int> index(pts.size(), -1);
    for (size_t i = 0; i < pts.size(); ++i) {
        if (rep[i] >= 0) continue;
        rep[i] = static_cast<int>(i);
        index[i] = static_cast<int>(out.P.size());
        out.P.push_back(Vec2(pts[i].x(), pts[i].y()));
        hash.query(pts[i], tol, [&](int j, double) {
            if (rep[j] < 0) {
                rep[j] = static_cast<int>(i);
                index[j] = index[i];
            }
        });
    }
    size_t base = 0;
    for (const auto& m : parts) {
        for (const auto& t : m.T) out.T.push_back({index[base + t[0]], index[base + t[1]], index[base + t[2]]});
        base += m.P.size();
    }
    return out;
}

double polar_angle(const Vec2& p) {
    double a = std::atan2(p.y(), p.x());
    return a < 0 ? a + 2 * kPi : a;
}

bool on_q_ray(const Vec3& p, int k) {
    double th = std::atan2(p.y(), p.x());
    double f = (th - kPi / (2.0 * k)) / (kPi / k);
    return std::abs(f - std::round(f)) < 1e-9;
}

std::vector<Vec2> sample_piece(const std::function<Vec2(double)>& c, const std::function<double(const Vec2&)>& size,
                               int min_segments = 1) {
    std::vector<Vec2> out;
    for (double t : graded_parameters(c, size, min_segments)) out.push_back(c(t));
    return out;
}

// appends a piece without its last point
void append_open(std::vector<Vec2>& loop, const std::vector<Vec2>& piece) {
    for (size_t i = 0; i + 1 < piece.size(); ++i) loop.push_back(piece[i]);
}

TriMesh planar_to_mesh(const PlanarMesh& pm) {
    TriMesh m;
    for (const auto& p : pm.P) m.add_vertex(lift(p));
    m.F = pm.T;
    return m;
}

void check_quality(const TriMesh& m, const char* what) {
    double q = min_triangle_quality(m);
    if (!(q > 0.05)) throw Error(ErrorKind::MeshQuality, std::string(what) + ": minimum triangle quality " + std::to_string(q));
}

// welds vertices at equal positions, keeping the first
TriMesh weld_coincident(const TriMesh& m, double tol) {
    SpatialHash hash(m.V, std::max(10 * tol, 1e-9));
    std::vector<int> rep(m.V.size(), -1);
    TriMesh out;
    for (size_t i = 0; i < m.V.size(); ++i) {
        if (rep[i] >= 0) continue;
        int idx = out.add_vertex(m.V[i], m.tags.size() == m.V.size() ? m.tags[i] : VertexTag{});
        rep[i] = idx;
        hash.query(m.V[i], tol, [&](int j, double) {
            if (rep[j] < 0) rep[j] = idx;
        });
    }
    for (const auto& f : m.F) out.F.push_back({rep[f[0]], rep[f[1]], rep[f[2]]});
    return out;
}

}  // namespace

PlanarMesh replicate_dihedral(const PlanarMesh& wedge, int m) {
    std::vector<PlanarMesh> parts;
    for (int j = 0; j < m; ++j) {
        for (int refl = 0; refl < 2; ++refl) {
            PlanarMesh c = wedge;
            double a = 2 * kPi * j / m;
            for (auto& p : c.P) {
                double r = p.norm(), th = std::atan2(p.y(), p.x());
                double t2 = refl ? a - th : a + th;
                p = Vec2(r * std::cos(t2), r * std::sin(t2));
            }
            if (refl)
                for (auto& t : c.T) std::swap(t[1], t[2]);
            parts.push_back(std::move(c));
        }
    }
    double scale = 0;
    for (const auto& p : wedge.P) scale = std::max(scale, p.norm());
    PlanarMesh out = merge_planar(parts, 1e-10 * std::max(1.0, scale));
    out.num_boundary = 0;
    return out;
}

void orient_consistently(TriMesh& m) {
    std::map<std::pair<int, int>, std::vector<int>> edge_faces;
    for (size_t f = 0; f < m.F.size(); ++f)
        for (int j = 0; j < 3; ++j) {
            int a = m.F[f][j], b = m.F[f][(j + 1) % 3];
            edge_faces[{std::min(a, b), std::max(a, b)}].push_back(static_cast<int>(f));
        }
    std::vector<int> state(m.F.size(), 0);  // 0 unvisited, 1 visited
    auto has_directed = [&](int f, int a, int b) {
        for (int j = 0; j < 3; ++j)
            if (m.F[f][j] == a && m.F[f][(j + 1) % 3] == b) return true;
        return false;
    };
    for (size_t s = 0; s < m.F.size(); ++s) {
        if (state[s]) continue;
        std::deque<int> q{static_cast<int>(s)};
        state[s] = 1;
        while (!q.empty()) {
            int f = q.front();
            q.pop_front();
            for (int j = 0; j < 3; ++j) {
                int a = m.F[f][j], b = m.F[f][(j + 1) % 3];
                for (int g : edge_faces[std::make_pair(std::min(a, b), std::max(a, b))]) {
                    if (g == f || state[g]) continue;
                    if (has_directed(g, a, b)) std::swap(m.F[g][1], m.F[g][2]);
                    state[g] = 1;
                    q.push_back(g);
                }
            }
        }
    }
}

TriMesh seed_annulus(double s, double eps, int k, double R, const SeedOptions& opt) {
    if (k < 1) throw Error(ErrorKind::InvalidParameter, "k must be positive");
    if (!(s > 0)) throw Error(ErrorKind::InvalidParameter, "annulus seed needs s > 0");
    if (!(eps > 0) || !(eps < R)) throw Error(ErrorKind::InvalidParameter, "need 0 < eps < R");
    LeafCircle lc = circle_of_leaf(s, R);
    const double phis = std::asin(lc.z / R);
    const double hb = R * phis;  // band height in the unfolded plane
    if (!(eps < R - hb)) throw Error(ErrorKind::InvalidParameter, "eps too large for the band");
    const double th0 = kPi / (2.0 * k), w = kPi / k;
    const double ref = opt.refine;
    const double hq = opt.q_size * hb / ref, hband = hb / opt.band_rows / ref, hhole = opt.hole_size * eps / ref;
    const double hmax = opt.h_max / ref, g = opt.grade;
    std::vector<Vec2> Q;
    for (int j = 0; j < 2 * k; ++j) {
        double t = (2 * j + 1) * th0;
        Q.emplace_back(R * std::cos(t), R * std::sin(t));
    }
    auto size = [&](const Vec2& p) {
        double r = p.norm();
        double dq = 1e300;
        for (const auto& q : Q) dq = std::min(dq, (p - q).norm());
        double h = std::min(hmax, hq + g * dq);
        h = std::min(h, hband + g * std::max(0.0, (R - hb) - r));
        h = std::min(h, hhole + g * std::max(0.0, r - eps));
        return h;
    };
    auto polar = [](double r, double th) { return Vec2(r * std::cos(th), r * std::sin(th)); };
    const double Rb = R + hb;
    // shared arc r = R, th0 -> w
    auto d = sample_piece([&](double t) { return polar(R, th0 + (w - th0) * t); }, size, 2);
    std::vector<Vec2> dr(d.rbegin(), d.rend());
    // band wedge
    std::vector<Vec2> L1;
    append_open(L1, sample_piece([&](double t) { return polar(R + hb * t, 0.0); }, size, 2));
    append_open(L1, sample_piece([&](double t) { return polar(Rb, w * t); }, size, 2));
    append_open(L1, sample_piece([&](double t) { return polar(Rb - hb * t, w); }, size, 2));
    append_open(L1, dr);
    append_open(L1, sample_piece([&](double t) { return polar(R, th0 * (1 - t)); }, size, 2));
    // odd flat wedge
    std::vector<Vec2> L2;
    append_open(L2, sample_piece([&](double t) { return polar(eps + (R - eps) * t, th0); }, size, 2));
    append_open(L2, d);
    append_open(L2, sample_piece([&](double t) { return polar(R - (R - eps) * t, w); }, size, 2));
    append_open(L2, sample_piece([&](double t) { return polar(eps, w - (w - th0) * t); }, size, 1));
    PlanarMesh m1 = mesh_polygon_domain({L1}, size);
    PlanarMesh m2 = mesh_polygon_domain({L2}, size);
    PlanarMesh wedge = merge_planar({m1, m2}, 1e-10 * R);
    PlanarMesh full = replicate_dihedral(wedge, k);

    TriMesh A;
    for (const auto& p : full.P) {
        double r = p.norm(), th = std::atan2(p.y(), p.x());
        if (r <= R * (1 + 1e-12)) {
            A.add_vertex(lift(p));
        } else {
            double ph = std::min(1.0, (r - R) / hb) * phis;
            A.add_vertex(Vec3(R * std::cos(ph) * std::cos(th), R * std::cos(ph) * std::sin(th), R * std::sin(ph)));
        }
    }
    A.F = full.T;
    Topology topo = build_topology(A);
    const double tol = 1e-9 * R;
    for (size_t i = 0; i < A.nv(); ++i) {
        if (!topo.boundary_vertex[i]) continue;
        const Vec2& p = full.P[i];
        double r = p.norm();
        double th = polar_angle(p);
        VertexTag t;
        if (r >= Rb - tol) {
            t = {curve::kUpper, th};
            A.V[i] = Vec3(lc.rho * std::cos(th), lc.rho * std::sin(th), lc.z);
        } else if (r <= eps + tol) {
            t = {curve::kHole, th};
        } else if (std::abs(r - R) <= tol) {
            t = {curve::kMiddle, th};
        } else {
            t = {curve::kGamma, r};
        }
        A.tags[i] = t;
    }
    check_quality(A, "seed_annulus");
    return A;
}

TriMesh reflect_union(const TriMesh& A, int k) {
    const Mat3 rho = rotation_pi_about_horizontal(kPi / (2.0 * k));
    TriMesh B = transform_mesh(A, rho, true);
    Topology ta = build_topology(A);
    double scale = 0;
    for (const auto& p : A.V) scale = std::max(scale, p.norm());
    const double tol = 1e-9 * std::max(1.0, scale);
    auto candidate = [&](const TriMesh& m, int i) {
        const VertexTag& t = m.tags[i];
        if (t.curve == curve::kGamma) return true;
        return (t.curve == curve::kMiddle || t.curve == curve::kHole) && on_q_ray(m.V[i], k);
    };
    std::vector<Vec3> cand_pts;
    std::vector<int> cand_idx;
    for (size_t i = 0; i < A.nv(); ++i)
        if (ta.boundary_vertex[i] && candidate(A, static_cast<int>(i))) {
            cand_pts.push_back(A.V[i]);
            cand_idx.push_back(static_cast<int>(i));
        }
    SpatialHash hash(cand_pts, std::max(100 * tol, 1e-6));
    TriMesh out = A;
    std::vector<int> map(B.nv(), -1);
    std::vector<char> matched(cand_idx.size(), 0);
    for (size_t i = 0; i < B.nv(); ++i) {
        VertexTag t = B.tags[i];
        if (t.curve == curve::kUpper) t.curve = curve::kLower;
        if (t.curve == curve::kUpper || t.curve == curve::kLower || t.curve == curve::kMiddle || t.curve == curve::kHole)
            t.param = polar_angle(Vec2(B.V[i].x(), B.V[i].y()));
        if (candidate(B, static_cast<int>(i))) {
            int j = hash.nearest(B.V[i], tol);
            if (j < 0) throw Error(ErrorKind::WeldError, "no partner for weld vertex " + std::to_string(i));
            map[i] = cand_idx[j];
            matched[j] = 1;
            continue;
        }
        map[i] = out.add_vertex(B.V[i], t);
    }
    for (size_t j = 0; j < matched.size(); ++j)
        if (!matched[j]) throw Error(ErrorKind::WeldError, "unmatched weld vertex on the first sheet");
    for (int i : cand_idx)
        if (out.tags[i].curve == curve::kGamma) out.tags[i] = VertexTag{};
    for (const auto& f : B.F) out.F.push_back({map[f[0]], map[f[1]], map[f[2]]});
    build_topology(out);  // orientation and manifold check
    return out;
}

TriMesh cap_hole(const TriMesh& m) {
    Topology t = build_topology(m);
    TriMesh out = m;
    int capped = 0;
    for (const auto& loop : t.boundary_loops) {
        bool hole = std::all_of(loop.begin(), loop.end(), [&](int v) { return m.tags[v].curve == curve::kHole; });
        if (!hole) continue;
        Vec3 c = Vec3::Zero();
        for (int v : loop) c += m.V[v];
        c /= static_cast<double>(loop.size());
        int ci = out.add_vertex(c);
        for (size_t i = 0; i < loop.size(); ++i) {
            int a = loop[i], b = loop[(i + 1) % loop.size()];
            out.F.push_back({b, a, ci});
        }
        for (int v : loop) out.tags[v] = VertexTag{};
        ++capped;
    }
    if (capped == 0) spdlog::warn("cap_hole: no hole loop found");
    return out;
}

TriMesh seed_disk(int k, double R, const SeedOptions& opt) {
    if (k < 1) throw Error(ErrorKind::InvalidParameter, "k must be positive");
    const double a = kPi / (2.0 * k);
    const double h = opt.h_max / opt.refine;
    auto size = [&](const Vec2&) { return h; };
    auto polar = [](double r, double th) { return Vec2(r * std::cos(th), r * std::sin(th)); };
    std::vector<Vec2> L;
    append_open(L, sample_piece([&](double t) { return polar(R * t, 0.0); }, size, 2));
    append_open(L, sample_piece([&](double t) { return polar(R, a * t); }, size, 2));
    append_open(L, sample_piece([&](double t) { return polar(R * (1 - t), a); }, size, 2));
    PlanarMesh full = replicate_dihedral(mesh_polygon_domain({L}, size), 2 * k);
    TriMesh m = planar_to_mesh(full);
    Topology t = build_topology(m);
    for (size_t i = 0; i < m.nv(); ++i)
        if (t.boundary_vertex[i]) m.tags[i] = {curve::kMiddle, polar_angle(full.P[i])};
    check_quality(m, "seed_disk");
    return m;
}

namespace {

// sheet of radius Rs on a wedge [0, alpha] with a half-disk notch centred on
// the theta = 0 edge
PlanarMesh notched_wedge(double Rs, double alpha, double rn, double rh, int notch_nodes,
                         const std::function<double(const Vec2&)>& size) {
    auto polar = [](double r, double th) { return Vec2(r * std::cos(th), r * std::sin(th)); };
    std::vector<Vec2> L;
    append_open(L, sample_piece([&](double t) { return Vec2((rn - rh) * t, 0.0); }, size, 2));
    for (int i = 0; i < notch_nodes; ++i) {
        double ph = kPi * (1.0 - static_cast<double>(i) / notch_nodes);
        L.push_back(Vec2(rn + rh * std::cos(ph), rh * std::sin(ph)));
    }
    append_open(L, sample_piece([&](double t) { return Vec2(rn + rh + (Rs - rn - rh) * t, 0.0); }, size, 1));
    append_open(L, sample_piece([&](double t) { return polar(Rs, alpha * t); }, size, 2));
    append_open(L, sample_piece([&](double t) { return polar(Rs * (1 - t), alpha); }, size, 2));
    return mesh_polygon_domain({L}, size);
}

// straight tube between two rings of equal xy positions
TriMesh neck_tube(const std::vector<Vec3>& ring, double z0, double z1, int rows) {
    TriMesh m;
    const int n = static_cast<int>(ring.size());
    for (int r = 0; r <= rows; ++r) {
        double z = z0 + (z1 - z0) * r / rows;
        for (const auto& p : ring) m.add_vertex(Vec3(p.x(), p.y(), z));
    }
    for (int r = 0; r < rows; ++r)
        for (int i = 0; i < n; ++i) {
            int a = r * n + i, b = r * n + (i + 1) % n, c = (r + 1) * n + i, d = (r + 1) * n + (i + 1) % n;
            // centre vertex keeps the split mirror symmetric
            int e = m.add_vertex(0.25 * (m.V[a] + m.V[b] + m.V[c] + m.V[d]));
            m.F.push_back({a, b, e});
            m.F.push_back({b, d, e});
            m.F.push_back({d, c, e});
            m.F.push_back({c, a, e});
        }
    return m;
}

}  // namespace

TriMesh seed_big_double_sheet(double s, int k, double R, const SeedOptions& opt) {
    if (k < 1) throw Error(ErrorKind::InvalidParameter, "k must be positive");
    if (!(s > 0)) throw Error(ErrorKind::InvalidParameter, "big seed needs s > 0");
    LeafCircle lc = circle_of_leaf(s, R);
    const double h = opt.h_max / opt.refine;
    const double rn = 0.5 * R, rh = std::min(0.2 * R * std::sin(kPi / (2.0 * k)), 0.25 * rn);
    const int notch_nodes = std::max(6, static_cast<int>(std::ceil(kPi * rh / std::min(h, 0.5 * kPi * rh / 3))));
    const double hn = kPi * rh / notch_nodes;
    auto size = [&](const Vec2& p) {
        double dn = 1e300;
        for (int j = 0; j < 2 * k; ++j) dn = std::min(dn, (p - Vec2(rn * std::cos(j * kPi / k), rn * std::sin(j * kPi / k))).norm());
        return std::min(h, hn + opt.grade * std::max(0.0, dn - rh));
    };
    TriMesh upper = planar_to_mesh(replicate_dihedral(notched_wedge(lc.rho, kPi / k, rn, rh, notch_nodes, size), k));
    for (auto& p : upper.V) p.z() = lc.z;
    TriMesh middle = planar_to_mesh(replicate_dihedral(notched_wedge(R, kPi / (2.0 * k), rn, rh, notch_nodes, size), 2 * k));
    const int rows = std::max(2, static_cast<int>(std::ceil(lc.z / hn)));
    TriMesh top = upper;
    for (int j = 0; j < k; ++j) {
        double th = 2 * j * kPi / k;
        Vec2 c(rn * std::cos(th), rn * std::sin(th));
        std::vector<std::pair<double, Vec3>> ring;
        for (const auto& p : upper.V)
            if (std::abs((Vec2(p.x(), p.y()) - c).norm() - rh) < 1e-9) ring.push_back({std::atan2(p.y() - c.y(), p.x() - c.x()), p});
        std::sort(ring.begin(), ring.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<Vec3> pts;
        for (const auto& e : ring) pts.push_back(e.second);
        append_mesh(top, neck_tube(pts, 0.0, lc.z, rows));
    }
    top = weld_coincident(top, 1e-10 * R);
    TriMesh bottom = transform_mesh(top, rotation_pi_about_horizontal(kPi / (2.0 * k)));
    TriMesh all = middle;
    append_mesh(all, top);
    append_mesh(all, bottom);
    all = weld_coincident(all, 1e-10 * R);
    orient_consistently(all);
    Topology t = build_topology(all);
    for (size_t i = 0; i < all.nv(); ++i) {
        all.tags[i] = VertexTag{};
        if (!t.boundary_vertex[i]) continue;
        const Vec3& p = all.V[i];
        double th = polar_angle(Vec2(p.x(), p.y()));
        int id = std::abs(p.z()) < 1e-12 ? curve::kMiddle : (p.z() > 0 ? curve::kUpper : curve::kLower);
        all.tags[i] = {id, th};
    }
    check_quality(all, "seed_big_double_sheet");
    return all;
}

}  // namespace expander
