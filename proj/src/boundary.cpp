#include "expander/boundary.hpp"
#include "expander/foliation.hpp"
#include "expander/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace expander {

namespace {

double wrap(double a) {
    while (a > kPi) a -= 2 * kPi;
    while (a <= -kPi) a += 2 * kPi;
    return a;
}

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
    Vec3 d = b - a;
    double l2 = d.squaredNorm();
    double t = l2 > 0 ? std::clamp((p - a).dot(d) / l2, 0.0, 1.0) : 0.0;
    return (p - (a + t * d)).norm();
}

// distance between segments pq and rs
double segment_distance(const Vec3& p, const Vec3& q, const Vec3& r, const Vec3& s) {
    Vec3 d1 = q - p, d2 = s - r, w = p - r;
    double a = d1.dot(d1), b = d1.dot(d2), c = d2.dot(d2), d = d1.dot(w), e = d2.dot(w);
    double den = a * c - b * b;
    double sN, tN, sD = den, tD = den;
    if (den < 1e-14 * a * c) {
        sN = 0.0;
        sD = 1.0;
        tN = e;
        tD = c;
    } else {
        sN = b * e - c * d;
        tN = a * e - b * d;
        if (sN < 0) {
            sN = 0;
            tN = e;
            tD = c;
        } else if (sN > sD) {
            sN = sD;
            tN = e + b;
            tD = c;
        }
    }
    if (tN < 0) {
        tN = 0;
        if (-d < 0)
            sN = 0;
        else if (-d > a)
            sN = sD;
        else {
            sN = -d;
            sD = a;
        }
    } else if (tN > tD) {
        tN = tD;
        if (-d + b < 0)
            sN = 0;
        else if (-d + b > a)
            sN = sD;
        else {
            sN = -d + b;
            sD = a;
        }
    }
    double sc = std::abs(sN) < 1e-300 ? 0.0 : sN / sD;
    double tc = std::abs(tN) < 1e-300 ? 0.0 : tN / tD;
    return (w + sc * d1 - tc * d2).norm();
}

double max_segment(const std::vector<Vec3>& pts) {
    double m = 0;
    for (size_t i = 0; i < pts.size(); ++i) m = std::max(m, (pts[(i + 1) % pts.size()] - pts[i]).norm());
    return m;
}

// discrete curvature bound: turning angle over mean adjacent length
double max_curvature(const std::vector<Vec3>& pts) {
    const size_t n = pts.size();
    double m = 0;
    for (size_t i = 0; i < n; ++i) {
        Vec3 a = pts[i] - pts[(i + n - 1) % n], b = pts[(i + 1) % n] - pts[i];
        double la = a.norm(), lb = b.norm();
        if (la <= 0 || lb <= 0) continue;
        double ang = std::atan2(a.cross(b).norm(), a.dot(b));
        m = std::max(m, 2 * ang / (la + lb));
    }
    return m;
}

}  // namespace

int winding_number(const std::vector<Vec3>& pts) {
    double tot = 0;
    for (size_t i = 0; i < pts.size(); ++i) {
        const Vec3& a = pts[i];
        const Vec3& b = pts[(i + 1) % pts.size()];
        tot += wrap(std::atan2(b.y(), b.x()) - std::atan2(a.y(), a.x()));
    }
    return static_cast<int>(std::lround(tot / (2 * kPi)));
}

double polyline_eps_max(const std::vector<Vec3>& pts) {
    double m = 0;
    for (const auto& p : pts) m = std::max(m, std::abs(p.z()) / std::hypot(p.x(), p.y()));
    return m;
}

double set_invariance_residual(const std::vector<BoundaryCurve>& curves, const SymmetryGroup& group) {
    double worst = 0;
    for (const auto& g : group.elements) {
        for (const auto& c : curves) {
            for (const auto& p : c.pts) {
                Vec3 q = g * p;
                double best = 1e300;
                for (const auto& c2 : curves) {
                    const size_t n = c2.pts.size();
                    for (size_t i = 0; i < n; ++i) best = std::min(best, point_segment_distance(q, c2.pts[i], c2.pts[(i + 1) % n]));
                }
                worst = std::max(worst, best);
            }
        }
    }
    return worst;
}

ValidationReport validate_boundary(BoundarySpec& spec, const SymmetryGroup* group, double eps_star) {
    ValidationReport r;
    std::ostringstream msg;
    const double R = spec.R;
    double eps_max = 0, seg = 0, kappa = 0;
    for (auto& c : spec.curves) {
        if (c.pts.size() < 3) {
            r.embedded = false;
            msg << "curve with fewer than 3 points; ";
            continue;
        }
        c.winding = winding_number(c.pts);
        if (std::abs(c.winding) != 1) r.winding_ok = false;
        for (const auto& p : c.pts) {
            if (std::abs(p.norm() - R) > 1e-10 * std::max(1.0, R)) r.on_sphere = false;
            if (std::hypot(p.x(), p.y()) < 1e-9 * R) r.off_axis = false;
        }
        if (r.off_axis) eps_max = std::max(eps_max, polyline_eps_max(c.pts));
        seg = std::max(seg, max_segment(c.pts));
        kappa = std::max(kappa, max_curvature(c.pts));
        // non-adjacent segments must stay apart
        const size_t n = c.pts.size();
        const double tol = 1e-9 * R;
        for (size_t i = 0; i < n && r.embedded; ++i)
            for (size_t j = i + 2; j < n; ++j) {
                if (i == 0 && j == n - 1) continue;
                if (segment_distance(c.pts[i], c.pts[(i + 1) % n], c.pts[j], c.pts[(j + 1) % n]) < tol) {
                    r.embedded = false;
                    msg << "self intersection near point " << i << "; ";
                    break;
                }
            }
    }
    for (size_t a = 0; a < spec.curves.size(); ++a)
        for (size_t b = a + 1; b < spec.curves.size(); ++b) {
            const auto& P = spec.curves[a].pts;
            const auto& Q = spec.curves[b].pts;
            double dmin = 1e300;
            for (size_t i = 0; i < P.size(); ++i)
                for (size_t j = 0; j < Q.size(); ++j)
                    dmin = std::min(dmin, segment_distance(P[i], P[(i + 1) % P.size()], Q[j], Q[(j + 1) % Q.size()]));
            if (dmin < 1e-9 * R) {
                r.disjoint = false;
                msg << "curves " << a << " and " << b << " meet; ";
            }
        }
    r.eps_max = eps_max;
    spec.eps_max = eps_max;
    r.region_ok = eps_max <= eps_star;
    if (!r.winding_ok) msg << "winding number not one; ";
    if (!r.region_ok) msg << "eps_max " << eps_max << " exceeds " << eps_star << "; ";
    if (group) {
        r.invariance_residual = set_invariance_residual(spec.curves, *group);
        // chord sag of a polyline is at most L^2 kappa / 8
        r.invariance_tol = std::max(1e-9 * R, 0.25 * seg * seg * kappa);
        r.invariant = r.invariance_residual <= r.invariance_tol;
        if (!r.invariant) msg << "not invariant (residual " << r.invariance_residual << "); ";
    }
    r.admissible = spec.curves.size() == 3 && r.on_sphere && r.off_axis && r.embedded && r.disjoint && r.winding_ok &&
                   r.region_ok && r.invariant;
    r.message = msg.str();
    spec.report = r;
    return r;
}

BoundarySpec circles_from_heights(double R, const std::vector<double>& heights, int n_seg) {
    BoundarySpec spec;
    spec.R = R;
    const int ids[3] = {curve::kUpper, curve::kMiddle, curve::kLower};
    for (size_t c = 0; c < heights.size(); ++c) {
        BoundaryCurve bc;
        bc.curve_id = c < 3 ? ids[c] : curve::kGeneric;
        double z = heights[c];
        double rho = std::sqrt(R * R - z * z);
        for (int j = 0; j < n_seg; ++j) {
            double t = 2 * kPi * j / n_seg;
            bc.pts.emplace_back(rho * std::cos(t), rho * std::sin(t), z);
        }
        spec.curves.push_back(std::move(bc));
    }
    return spec;
}

BoundarySpec make_circles_boundary(double s, double R, int n_seg) {
    if (!(s > 0)) throw Error(ErrorKind::InvalidParameter, "circles must be distinct: need s > 0");
    if (n_seg < 16) throw Error(ErrorKind::InvalidParameter, "n_seg must be at least 16");
    LeafCircle up = circle_of_leaf(s, R);
    BoundarySpec spec = circles_from_heights(R, {up.z, 0.0, -up.z}, n_seg);
    // keep the exact leaf radius rather than recomputing from the height
    for (auto& p : spec.curves[0].pts) {
        double t = std::atan2(p.y(), p.x());
        p = Vec3(up.rho * std::cos(t), up.rho * std::sin(t), up.z);
    }
    for (auto& p : spec.curves[2].pts) {
        double t = std::atan2(p.y(), p.x());
        p = Vec3(up.rho * std::cos(t), up.rho * std::sin(t), -up.z);
    }
    validate_boundary(spec, nullptr, 1.0);
    return spec;
}

BoundarySpec make_cone_boundary(const std::vector<std::vector<Vec3>>& link, double R, int k, double eps_star) {
    if (!(R > 0)) throw Error(ErrorKind::InvalidParameter, "R must be positive");
    BoundarySpec spec;
    spec.R = R;
    for (const auto& c : link) {
        BoundaryCurve bc;
        for (const auto& p : c) bc.pts.push_back(R * p.normalized());
        spec.curves.push_back(std::move(bc));
    }
    // order by mean height: upper, middle, lower
    std::sort(spec.curves.begin(), spec.curves.end(), [](const BoundaryCurve& a, const BoundaryCurve& b) {
        double za = 0, zb = 0;
        for (const auto& p : a.pts) za += p.z();
        for (const auto& p : b.pts) zb += p.z();
        return za / a.pts.size() > zb / b.pts.size();
    });
    const int ids[3] = {curve::kUpper, curve::kMiddle, curve::kLower};
    for (size_t i = 0; i < spec.curves.size(); ++i) spec.curves[i].curve_id = i < 3 ? ids[i] : curve::kGeneric;
    SymmetryGroup g = build_group(k);
    ValidationReport r = validate_boundary(spec, &g, eps_star);
    if (!r.winding_ok || !r.off_axis || !r.disjoint || !r.embedded)
        throw Error(ErrorKind::RejectedBoundary, r.message);
    if (!r.region_ok) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "region bound violated: eps_max = %.6g", r.eps_max);
        throw Error(ErrorKind::RejectedBoundary, buf);
    }
    return spec;
}

std::vector<std::vector<Vec3>> wiggled_link(int n, double a, double h, double b) {
    std::vector<std::vector<Vec3>> out;
    for (int c : {1, 0, -1}) {
        std::vector<Vec3> pts;
        for (int j = 0; j < n; ++j) {
            double t = 2 * kPi * j / n;
            double th = t + a * std::sin(6 * t);
            double z = c * h + b * std::cos(3 * t);
            pts.push_back(Vec3(std::cos(th), std::sin(th), z) / std::sqrt(1 + z * z));
        }
        out.push_back(std::move(pts));
    }
    return out;
}

GammaCurve make_gamma(int k, double R, double eps, int nodes_per_arc, int nodes_per_ray) {
    if (k < 1) throw Error(ErrorKind::InvalidParameter, "k must be positive");
    if (!(eps > 0) || !(eps < R)) throw Error(ErrorKind::InvalidParameter, "need 0 < eps < R");
    GammaCurve g;
    const double w = kPi / k;
    auto push = [&](double r, double th, GammaPiece p) {
        g.pts.emplace_back(r * std::cos(th), r * std::sin(th), 0.0);
        g.piece.push_back(p);
    };
    // start at the ray theta = -pi/(2k), outer end; sector j is centred at j pi/k
    for (int j = 0; j < 2 * k; ++j) {
        double a = (j - 0.5) * w, b = (j + 0.5) * w;
        bool even = j % 2 == 0;
        double r = even ? R : eps;
        for (int i = 0; i < nodes_per_arc; ++i)
            push(r, a + (b - a) * i / nodes_per_arc, even ? GammaPiece::OuterArc : GammaPiece::InnerArc);
        // ray at b from r to the other radius
        double r2 = even ? eps : R;
        for (int i = 0; i < nodes_per_ray; ++i) push(r + (r2 - r) * i / nodes_per_ray, b, GammaPiece::Ray);
    }
    return g;
}

double polygon_area_xy(const std::vector<Vec3>& pts) {
    double a = 0;
    for (size_t i = 0; i < pts.size(); ++i) {
        const Vec3& p = pts[i];
        const Vec3& q = pts[(i + 1) % pts.size()];
        a += p.x() * q.y() - q.x() * p.y();
    }
    return 0.5 * a;
}

double total_turning_xy(const std::vector<Vec3>& pts) {
    const size_t n = pts.size();
    double t = 0;
    for (size_t i = 0; i < n; ++i) {
        Vec3 a = pts[i] - pts[(i + n - 1) % n], b = pts[(i + 1) % n] - pts[i];
        t += std::atan2(a.x() * b.y() - a.y() * b.x(), a.x() * b.x() + a.y() * b.y());
    }
    return t;
}

bool polyline_is_simple_xy(const std::vector<Vec3>& pts) {
    const size_t n = pts.size();
    auto orient = [](const Vec3& a, const Vec3& b, const Vec3& c) {
        return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
    };
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            const Vec3 &a = pts[i], &b = pts[(i + 1) % n], &c = pts[j], &d = pts[(j + 1) % n];
            double o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
            if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0))) return false;
            if (segment_distance(a, b, c, d) < 1e-12) return false;
        }
    return true;
}

void write_boundary_csv(const BoundarySpec& spec, const std::string& prefix) {
    for (size_t c = 0; c < spec.curves.size(); ++c) {
        std::string path = prefix + "_loop" + std::to_string(c) + ".csv";
        std::ofstream out(path);
        if (!out) throw Error(ErrorKind::InvalidParameter, "cannot write " + path);
        out << "x,y,z\n";
        char buf[96];
        for (const auto& p : spec.curves[c].pts) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p.x(), p.y(), p.z());
            out << buf;
        }
    }
}

}  // namespace expander
