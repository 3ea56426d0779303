#include "expander/cone_tracking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace expander {

Cone cone_from_boundary(const BoundarySpec& spec) {
    Cone c;
    for (const auto& cv : spec.curves) {
        std::vector<Vec3> l;
        l.reserve(cv.pts.size());
        for (const auto& p : cv.pts) l.push_back(p.normalized());
        c.links.push_back(std::move(l));
    }
    return c;
}

namespace {

double ray_distance(const Vec3& x, const Vec3& dir) {
    double t = x.dot(dir);
    return t <= 0 ? x.norm() : (x - t * dir).norm();
}

// distance to the flat wedge {s a + t b : s, t >= 0}
double wedge_distance(const Vec3& x, const Vec3& a, const Vec3& b) {
    Vec3 n = a.cross(b);
    double l = n.norm();
    if (l > 0) {
        n /= l;
        double h = x.dot(n);
        Vec3 y = x - h * n;
        // coordinates of y in the basis (a, b)
        double aa = a.dot(a), ab = a.dot(b), bb = b.dot(b);
        double ya = y.dot(a), yb = y.dot(b), det = aa * bb - ab * ab;
        double s = (ya * bb - yb * ab) / det, t = (yb * aa - ya * ab) / det;
        if (s >= 0 && t >= 0) return std::abs(h);
    }
    return std::min(ray_distance(x, a), ray_distance(x, b));
}

}  // namespace

double cone_distance(const Cone& cone, const Vec3& x) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& l : cone.links)
        for (size_t i = 0; i < l.size(); ++i) d = std::min(d, wedge_distance(x, l[i], l[(i + 1) % l.size()]));
    return d;
}

RollingBall rolling_ball_lambda(const Cone& cone, int bisections) {
    // samples: facet midpoints of the link with the facet normal, |p| = 1
    struct Sample {
        Vec3 p, n;
    };
    std::vector<Sample> samples;
    for (const auto& l : cone.links)
        for (size_t i = 0; i < l.size(); ++i) {
            const Vec3 &a = l[i], &b = l[(i + 1) % l.size()];
            Vec3 n = a.cross(b);
            if (n.norm() == 0) continue;
            Vec3 m = 0.5 * (a + b);
            samples.push_back({m / m.norm(), n.normalized()});
        }
    auto ok = [&](double lam) {
        for (const auto& s : samples)
            for (double side : {1.0, -1.0}) {
                Vec3 c = s.p + side * lam * s.n;
                if (cone_distance(cone, c) < lam * (1.0 - 1e-9) - 1e-14) return false;
            }
        return true;
    };
    RollingBall rb;
    double lo = 1e-6, hi = 10.0;
    if (samples.empty() || !ok(lo) || ok(hi)) return rb;
    for (int i = 0; i < bisections; ++i) {
        double mid = std::sqrt(lo * hi);
        (ok(mid) ? lo : hi) = mid;
    }
    rb.lambda = lo;
    rb.conclusive = true;
    return rb;
}

double radius_rc(double lambda, double m) {
    return std::max(2.0 * std::sqrt(m / lambda), 4.0 * std::sqrt(2.0 * m) / lambda);
}

ConeTrackingResult cone_tracking_checks(const TriMesh& mesh, const Cone& cone, double m, double max_angle) {
    ConeTrackingResult r;
    RollingBall rb = rolling_ball_lambda(cone);
    r.lambda_hat = rb.lambda;
    r.conclusive = rb.conclusive;
    if (!rb.conclusive) throw Error(ErrorKind::Inconclusive, "rolling ball search did not bracket");
    r.eta = eta_bound(rb.lambda, m);
    r.r_c = radius_rc(rb.lambda, m);
    std::vector<double> pd(mesh.nv(), 0.0);
    for (size_t i = 0; i < mesh.nv(); ++i) {
        const Vec3& p = mesh.V[i];
        pd[i] = p.norm() * cone_distance(cone, p);
        r.max_pdist = std::max(r.max_pdist, pd[i]);
        if (p.norm() > r.r_c) {
            ++r.vertices_outside;
            r.max_pdist_outside = std::max(r.max_pdist_outside, pd[i]);
        }
    }
    r.eta_ok = r.max_pdist_outside <= r.eta;

    // normal graph test: beyond a radius, each face keeps its orientation when
    // projected radially to the link sphere and its normal stays close to the
    // nearest cone facet normal
    std::vector<double> face_r(mesh.nf());
    std::vector<char> face_bad(mesh.nf(), 0);
    double worst_angle_face = 0;
    std::vector<double> face_angle(mesh.nf(), 0.0);
    for (size_t f = 0; f < mesh.nf(); ++f) {
        const auto& F = mesh.F[f];
        const Vec3 &a = mesh.V[F[0]], &b = mesh.V[F[1]], &c = mesh.V[F[2]];
        face_r[f] = std::min({a.norm(), b.norm(), c.norm()});
        Vec3 ctr = (a + b + c) / 3.0;
        Vec3 n = (b - a).cross(c - a);
        if (n.norm() == 0) {
            face_bad[f] = 1;
            continue;
        }
        n.normalize();
        // nearest facet normal
        double best = std::numeric_limits<double>::infinity();
        Vec3 cn = Vec3::UnitZ();
        for (const auto& l : cone.links)
            for (size_t i = 0; i < l.size(); ++i) {
                double d = wedge_distance(ctr, l[i], l[(i + 1) % l.size()]);
                if (d < best) best = d, cn = l[i].cross(l[(i + 1) % l.size()]).normalized();
            }
        double ang = std::acos(std::min(1.0, std::abs(n.dot(cn))));
        face_angle[f] = ang;
        if (ang > max_angle) face_bad[f] = 1;
        // projected orientation relative to the facet normal
        Vec3 pa = a.normalized(), pb = b.normalized(), pc = c.normalized();
        double o = (pb - pa).cross(pc - pa).dot(cn);
        double o0 = n.dot(cn);
        if (o * o0 <= 0) face_bad[f] = 1;
    }
    double rt = 0, rmax = 0;
    for (size_t f = 0; f < mesh.nf(); ++f) {
        rmax = std::max(rmax, face_r[f]);
        if (face_bad[f]) rt = std::max(rt, face_r[f] + 1e-12);
    }
    r.r_tilde = rt;
    for (size_t f = 0; f < mesh.nf(); ++f)
        if (face_r[f] >= rt) worst_angle_face = std::max(worst_angle_face, face_angle[f]);
    r.max_angle = worst_angle_face;
    // some faces survive beyond r_tilde, so a graphical collar exists
    r.projection_injective = rt <= rmax;
    return r;
}

}  // namespace expander
