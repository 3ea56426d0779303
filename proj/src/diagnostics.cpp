#include "expander/diagnostics.hpp"
#include "expander/geometry.hpp"
#include "expander/kernels.hpp"
#include "expander/symmetry.hpp"

#include <Eigen/Dense>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>

namespace expander {

std::string to_string(SurfaceType t) {
    switch (t) {
        case SurfaceType::Type1: return "Type1";
        case SurfaceType::Type2: return "Type2";
        default: return "Other";
    }
}

namespace {

// point where a boundary loop crosses the half plane {y = 0, x > 0}
bool loop_crossing(const TriMesh& m, const std::vector<int>& loop, Vec3& out) {
    int found = 0;
    for (size_t j = 0; j < loop.size(); ++j) {
        const Vec3& p = m.V[loop[j]];
        const Vec3& q = m.V[loop[(j + 1) % loop.size()]];
        bool sp = p.y() >= -1e-12, sq = q.y() >= -1e-12;  // same side rule as slice_y0
        if (sp == sq) continue;
        double t = p.y() / (p.y() - q.y());
        Vec3 x = p + t * (q - p);
        if (x.x() <= 0) continue;
        out = x;
        ++found;
    }
    return found == 1;
}

double loop_winding(const TriMesh& m, const std::vector<int>& loop) {
    double w = 0;
    for (size_t j = 0; j < loop.size(); ++j) {
        const Vec3& p = m.V[loop[j]];
        const Vec3& q = m.V[loop[(j + 1) % loop.size()]];
        double d = std::atan2(q.y(), q.x()) - std::atan2(p.y(), p.x());
        if (d > kPi) d -= 2 * kPi;
        if (d < -kPi) d += 2 * kPi;
        w += d;
    }
    return w / (2 * kPi);
}

}  // namespace

SurfaceType classify_type(const TriMesh& mesh) {
    auto unavailable = [](const std::string& why) { return Error(ErrorKind::ClassificationUnavailable, why); };
    Topology t = build_topology(mesh);
    if (t.boundary_loops.size() != 3) throw unavailable("expected 3 boundary loops, found " + std::to_string(t.boundary_loops.size()));
    for (const auto& loop : t.boundary_loops)
        if (std::abs(std::abs(loop_winding(mesh, loop)) - 1.0) > 1e-6) throw unavailable("boundary loop does not wind once around Z");
    SymmetryGroup mirror = identity_group();
    mirror.elements.push_back(reflection_vertical_plane(0.0));
    try {
        discover_action(mesh, mirror, 1e-7);
    } catch (const Error&) {
        throw unavailable("mesh is not symmetric under y -> -y");
    }
    std::vector<Vec3> ends(3);
    for (int i = 0; i < 3; ++i)
        if (!loop_crossing(mesh, t.boundary_loops[i], ends[i])) throw unavailable("boundary loop does not cross {y=0, x>0} once");
    std::sort(ends.begin(), ends.end(), [](const Vec3& a, const Vec3& b) { return a.z() < b.z(); });
    if (ends[1].z() - ends[0].z() < 1e-9 || ends[2].z() - ends[1].z() < 1e-9) throw unavailable("boundary points at equal heights");
    const Vec3 &p_lower = ends[0], &p_middle = ends[1], &p_upper = ends[2];

    SliceResult sl = slice_y0(mesh);
    double scale = 0;
    for (const auto& p : mesh.V) scale = std::max(scale, p.norm());
    const double tol = 1e-7 * std::max(1.0, scale);
    auto near = [&](const Vec3& a, const Vec3& b) { return (a - b).norm() < tol; };
    bool joins_upper = false, joins_lower = false;
    for (const auto& c : sl.curves) {
        if (c.closed) return SurfaceType::Other;
        const Vec3 &a = c.pts.front(), &b = c.pts.back();
        if ((near(a, p_middle) && near(b, p_upper)) || (near(b, p_middle) && near(a, p_upper))) joins_upper = true;
        if ((near(a, p_middle) && near(b, p_lower)) || (near(b, p_middle) && near(a, p_lower))) joins_lower = true;
    }
    if (joins_upper && !joins_lower) return SurfaceType::Type1;
    if (joins_lower && !joins_upper) return SurfaceType::Type2;
    return SurfaceType::Other;
}

double phi_bump(const Vec3& p) {
    double q = 1.0 - 4.0 * p.squaredNorm();
    if (q <= 0) return 0.0;
    return kPhiNormalization * std::exp(-1.0 / q);
}

SizeResult size_class(const TriMesh& mesh) {
    // phi is smooth but sharply varying, so each face uses a degree 5 rule
    static const double w[7] = {0.225,
                                0.132394152788506, 0.132394152788506, 0.132394152788506,
                                0.125939180544827, 0.125939180544827, 0.125939180544827};
    static const double a1 = 0.059715871789770, b1 = 0.470142064105115;
    static const double a2 = 0.797426985353087, b2 = 0.101286507323456;
    const double bary[7][3] = {{1.0 / 3, 1.0 / 3, 1.0 / 3}, {a1, b1, b1}, {b1, a1, b1}, {b1, b1, a1},
                               {a2, b2, b2}, {b2, a2, b2}, {b2, b2, a2}};
    SizeResult r;
    double s = 0;
    for (const auto& f : mesh.F) {
        const Vec3 &a = mesh.V[f[0]], &b = mesh.V[f[1]], &c = mesh.V[f[2]];
        // faces far from the support contribute nothing
        double rmin = std::min({a.norm(), b.norm(), c.norm()});
        double diam = std::max({(a - b).norm(), (b - c).norm(), (c - a).norm()});
        if (rmin - diam >= 0.5) continue;
        double area = triangle_area(a, b, c), q = 0;
        for (int i = 0; i < 7; ++i) q += w[i] * phi_bump(bary[i][0] * a + bary[i][1] * b + bary[i][2] * c);
        s += q * area;
    }
    r.phi_integral = s;
    r.big = s >= 1.5;
    r.dichotomy_ok = s < 4.0 / 3.0 || s > 5.0 / 3.0;
    return r;
}

namespace {

// signed area of the planar triangle (0, a, b) inside the disk of radius r
double sector_piece(const Eigen::Vector2d& a, const Eigen::Vector2d& b, double r) {
    auto cross = [](const Eigen::Vector2d& u, const Eigen::Vector2d& v) { return u.x() * v.y() - u.y() * v.x(); };
    auto arc = [&](const Eigen::Vector2d& u, const Eigen::Vector2d& v) {
        return 0.5 * r * r * std::atan2(cross(u, v), u.dot(v));
    };
    const double r2 = r * r;
    bool ain = a.squaredNorm() <= r2, bin = b.squaredNorm() <= r2;
    Eigen::Vector2d d = b - a;
    double A = d.squaredNorm();
    if (A == 0) return 0.0;
    double B = a.dot(d), C = a.squaredNorm() - r2;
    double disc = B * B - A * C;
    if (ain && bin) return 0.5 * cross(a, b);
    if (disc <= 0) return arc(a, b);
    // chord part clipped to the segment; a vertex on the circle can put a root
    // a rounding error past 0 or 1, so no in/out case split here
    double sq = std::sqrt(disc);
    double lo = std::max((-B - sq) / A, 0.0), hi = std::min((-B + sq) / A, 1.0);
    if (lo >= hi) return arc(a, b);
    Eigen::Vector2d p = a + lo * d, q = a + hi * d;
    return arc(a, p) + 0.5 * cross(p, q) + arc(q, b);
}

}  // namespace

double triangle_ball_area(const Vec3& a, const Vec3& b, const Vec3& c, double r) {
    Vec3 n = (b - a).cross(c - a);
    double l = n.norm();
    if (l == 0) return 0.0;
    n /= l;
    double dist = a.dot(n);
    double rho2 = r * r - dist * dist;
    if (rho2 <= 0) return 0.0;
    double rho = std::sqrt(rho2);
    Vec3 ctr = dist * n;
    Vec3 e1 = (b - a).normalized();
    Vec3 e2 = n.cross(e1);
    auto proj = [&](const Vec3& p) { return Eigen::Vector2d((p - ctr).dot(e1), (p - ctr).dot(e2)); };
    Eigen::Vector2d A = proj(a), B = proj(b), C = proj(c);
    double s = sector_piece(A, B, rho) + sector_piece(B, C, rho) + sector_piece(C, A, rho);
    return std::abs(s);
}

MonotonicityResult monotonicity_series(const TriMesh& mesh, const std::vector<double>& radii, double slack, double cone_slack) {
    MonotonicityResult out;
    Topology t = build_topology(mesh);
    double rb = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < mesh.nv(); ++i)
        if (t.boundary_vertex[i]) rb = std::min(rb, mesh.V[i].norm());
    double prev = -1;
    for (double r : radii) {
        MonotonicityEntry e;
        e.r = r;
        double s = 0;
        for (const auto& f : mesh.F) s += triangle_ball_area(mesh.V[f[0]], mesh.V[f[1]], mesh.V[f[2]], r);
        e.ratio = s / (kPi * r * r);
        e.excluded = r >= rb;
        if (!e.excluded) {
            if (prev >= 0 && e.ratio < prev * (1.0 - slack)) out.monotone_ok = false;
            prev = e.ratio;
        }
        out.series.push_back(e);
    }
    out.area = euclidean_area(mesh);
    double bi = 0;
    for (size_t e = 0; e < t.edges.size(); ++e) {
        if (!t.is_boundary_edge(static_cast<int>(e))) continue;
        const Vec3 &p = mesh.V[t.edges[e][0]], &q = mesh.V[t.edges[e][1]];
        // Simpson on the chord
        bi += (q - p).norm() * (p.norm() + 4.0 * (0.5 * (p + q)).norm() + q.norm()) / 6.0;
    }
    out.boundary_integral = 0.5 * bi;
    out.cone_violation = out.boundary_integral > 0 ? std::max(0.0, out.area / out.boundary_integral - 1.0) : 0.0;
    out.cone_bound_ok = out.cone_violation <= cone_slack;
    return out;
}

namespace {

std::vector<double> vertex_a2(const TriMesh& mesh, const Topology& t, const std::vector<Vec3>& N) {
    // quadratic height fit over the two-ring in the tangent frame of N; the
    // linear terms absorb the tilt of the estimated normal
    std::vector<double> out(mesh.nv(), 0.0);
    std::vector<int> mark(mesh.nv(), -1), ring;
    for (size_t i = 0; i < mesh.nv(); ++i) {
        if (!t.used_vertex[i]) continue;
        ring.clear();
        mark[i] = static_cast<int>(i);
        for (int j : t.vertex_neighbors[i])
            if (mark[j] != static_cast<int>(i)) mark[j] = static_cast<int>(i), ring.push_back(j);
        const size_t n1 = ring.size();
        for (size_t a = 0; a < n1; ++a)
            for (int j : t.vertex_neighbors[ring[a]])
                if (mark[j] != static_cast<int>(i)) mark[j] = static_cast<int>(i), ring.push_back(j);
        if (ring.size() < 5) continue;
        const Vec3& n = N[i];
        Vec3 t1 = (std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY()).cross(n).normalized();
        Vec3 t2 = n.cross(t1);
        Eigen::MatrixXd A(ring.size(), 5);
        Eigen::VectorXd b(ring.size());
        for (size_t r = 0; r < ring.size(); ++r) {
            Vec3 e = mesh.V[ring[r]] - mesh.V[i];
            double x = e.dot(t1), y = e.dot(t2), w = 1.0 / e.norm();
            A.row(r) << w * x * x / 2, w * x * y, w * y * y / 2, w * x, w * y;
            b[r] = w * e.dot(n);
        }
        Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
        if (!c.allFinite()) continue;
        Eigen::Matrix2d H;
        H << c[0], c[1], c[1], c[2];
        Eigen::Vector2d g(c[3], c[4]);
        Eigen::Matrix2d I = Eigen::Matrix2d::Identity() + g * g.transpose();
        Eigen::Matrix2d S = I.inverse() * H / std::sqrt(1.0 + g.squaredNorm());
        out[i] = (S * S).trace();
    }
    return out;
}

// signed angle between consecutive boundary edges in the tangent plane,
// positive when turning toward the surface
double geodesic_turning(const TriMesh& mesh, const Topology& t, const GeometryCache& gc);

}  // namespace

double total_curvature(const TriMesh& mesh) {
    Topology t = build_topology(mesh);
    VertexFaces vf = build_vertex_faces(mesh.F, mesh.nv());
    std::vector<Vec3> N;
    std::vector<double> area;
    vertex_normals_parallel(mesh.V, mesh.F, vf, N, area);
    std::vector<double> a2 = vertex_a2(mesh, t, N);
    double s = 0;
    for (size_t i = 0; i < mesh.nv(); ++i) s += a2[i] * area[i];
    return 0.5 * s;
}

namespace {

double geodesic_turning(const TriMesh& mesh, const Topology& t, const GeometryCache& gc) {
    double s = 0;
    for (const auto& L : t.boundary_loops) {
        const size_t n = L.size();
        for (size_t j = 0; j < n; ++j) {
            int ib = L[j];
            const Vec3& N = gc.normal[ib];
            Vec3 e1 = mesh.V[ib] - mesh.V[L[(j + n - 1) % n]];
            Vec3 e2 = mesh.V[L[(j + 1) % n]] - mesh.V[ib];
            e1 -= e1.dot(N) * N;
            e2 -= e2.dot(N) * N;
            if (e1.norm() == 0 || e2.norm() == 0) continue;
            e1.normalize();
            e2.normalize();
            double ang = std::atan2(e1.cross(e2).norm(), e1.dot(e2));
            s += (e2 - e1).dot(gc.conormal[ib]) >= 0 ? ang : -ang;
        }
    }
    return s;
}

}  // namespace

GaussBonnetResult gauss_bonnet_residual(const TriMesh& mesh) {
    GaussBonnetResult g;
    Topology t = build_topology(mesh);
    GeometryCache gc = compute_geometry(mesh, t);
    EulerInfo eu = euler_and_genus(mesh);
    g.chi = eu.chi;
    std::vector<double> a2 = vertex_a2(mesh, t, gc.normal);
    double tc = 0;
    for (size_t i = 0; i < mesh.nv(); ++i) tc += a2[i] * gc.area_bary[i];
    g.total_curvature = 0.5 * tc;
    double sp = 0;
    for (size_t f = 0; f < mesh.nf(); ++f) {
        const auto& F = mesh.F[f];
        Vec3 c = (mesh.V[F[0]] + mesh.V[F[1]] + mesh.V[F[2]]) / 3.0;
        double pn = c.dot(gc.face_normal[f]);
        sp += pn * pn * gc.face_area[f];
    }
    g.support_term = sp / 8.0;
    g.boundary_term = geodesic_turning(mesh, t, gc);
    g.euler_term = 2 * kPi * g.chi;
    g.residual = g.total_curvature - (g.support_term + g.boundary_term - g.euler_term);
    g.relative = std::abs(g.residual) / std::max(g.total_curvature, 1e-300);
    return g;
}

}  // namespace expander
