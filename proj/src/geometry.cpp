#include "expander/geometry.hpp"

#include <cmath>

namespace expander {

double cot_angle(const Vec3& a, const Vec3& b, const Vec3& c) {
    Vec3 u = b - a, v = c - a;
    double cr = u.cross(v).norm();
    if (cr < 1e-300) return 0.0;
    return u.dot(v) / cr;
}

namespace {

double angle_at(const Vec3& a, const Vec3& b, const Vec3& c) {
    Vec3 u = b - a, v = c - a;
    return std::atan2(u.cross(v).norm(), u.dot(v));
}

}  // namespace

std::vector<double> shape_operator_norm2(const TriMesh& m, const Topology& t, const std::vector<Vec3>& nrm) {
    const size_t n = m.V.size();
    std::vector<double> out(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
        const auto& nb = t.vertex_neighbors[i];
        if (nb.size() < 2) continue;
        const Vec3& ni = nrm[i];
        Vec3 t1 = (std::abs(ni.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY()).cross(ni).normalized();
        Vec3 t2 = ni.cross(t1);
        Eigen::Matrix3d AtA = Eigen::Matrix3d::Zero();
        Eigen::Vector3d Atb = Eigen::Vector3d::Zero();
        for (int j : nb) {
            Vec3 e = m.V[j] - m.V[i];
            Vec3 dn = nrm[j] - ni;
            double e1 = e.dot(t1), e2 = e.dot(t2);
            double d1 = dn.dot(t1), d2 = dn.dot(t2);
            double w = 1.0 / std::max(e.squaredNorm(), 1e-300);
            // d1 = a e1 + b e2 ; d2 = b e1 + c e2
            Eigen::Vector3d r1(e1, e2, 0.0), r2(0.0, e1, e2);
            AtA += w * (r1 * r1.transpose() + r2 * r2.transpose());
            Atb += w * (r1 * d1 + r2 * d2);
        }
        Eigen::Vector3d s = AtA.ldlt().solve(Atb);
        if (!s.allFinite()) continue;
        out[i] = s[0] * s[0] + 2.0 * s[1] * s[1] + s[2] * s[2];
    }
    return out;
}

GeometryCache compute_geometry(const TriMesh& m, const Topology& t) {
    const size_t n = m.V.size(), nf = m.F.size();
    GeometryCache g;
    g.face_normal.resize(nf);
    g.face_area.resize(nf);
    g.normal.assign(n, Vec3::Zero());
    g.mean_curvature.assign(n, Vec3::Zero());
    g.area_bary.assign(n, 0.0);
    g.area_mixed.assign(n, 0.0);
    g.angle_defect.assign(n, 0.0);
    g.K.assign(n, 0.0);
    g.turning.assign(n, 0.0);
    g.conormal.assign(n, Vec3::Zero());
    g.degenerate.assign(n, 0);
    std::vector<double> angle_sum(n, 0.0);
    std::vector<Vec3> lap(n, Vec3::Zero());

    for (size_t f = 0; f < nf; ++f) {
        const auto& tri = m.F[f];
        const Vec3 &a = m.V[tri[0]], &b = m.V[tri[1]], &c = m.V[tri[2]];
        Vec3 cr = (b - a).cross(c - a);
        double area = 0.5 * cr.norm();
        g.face_area[f] = area;
        g.face_normal[f] = area > 0 ? Vec3(cr / (2 * area)) : Vec3::Zero();
        for (int j = 0; j < 3; ++j) {
            g.normal[tri[j]] += cr;  // area weighted
            g.area_bary[tri[j]] += area / 3.0;
        }
        const Vec3* P[3] = {&a, &b, &c};
        double ang[3], cot[3];
        for (int j = 0; j < 3; ++j) {
            ang[j] = angle_at(*P[j], *P[(j + 1) % 3], *P[(j + 2) % 3]);
            cot[j] = cot_angle(*P[j], *P[(j + 1) % 3], *P[(j + 2) % 3]);
            angle_sum[tri[j]] += ang[j];
        }
        // cotan Laplacian: edge opposite corner j
        for (int j = 0; j < 3; ++j) {
            int u = tri[(j + 1) % 3], v = tri[(j + 2) % 3];
            Vec3 d = m.V[v] - m.V[u];
            lap[u] += 0.5 * cot[j] * d;
            lap[v] -= 0.5 * cot[j] * d;
        }
        // mixed Voronoi area
        bool obtuse = ang[0] > kPi / 2 || ang[1] > kPi / 2 || ang[2] > kPi / 2;
        for (int j = 0; j < 3; ++j) {
            int v = tri[j];
            if (!obtuse) {
                const Vec3& p = *P[j];
                const Vec3& q = *P[(j + 1) % 3];
                const Vec3& r = *P[(j + 2) % 3];
                g.area_mixed[v] += 0.125 * ((q - p).squaredNorm() * cot[(j + 2) % 3] + (r - p).squaredNorm() * cot[(j + 1) % 3]);
            } else {
                g.area_mixed[v] += (ang[j] > kPi / 2) ? area / 2 : area / 4;
            }
        }
    }
    for (size_t i = 0; i < n; ++i) {
        double nn = g.normal[i].norm();
        if (nn > 0)
            g.normal[i] /= nn;
        else
            g.degenerate[i] = 1;
        if (g.area_mixed[i] > 0)
            g.mean_curvature[i] = lap[i] / g.area_mixed[i];
        else
            g.degenerate[i] = t.used_vertex[i] ? 1 : 0;
        if (t.boundary_vertex[i]) {
            g.angle_defect[i] = kPi - angle_sum[i];
            g.turning[i] = g.angle_defect[i];
        } else if (t.used_vertex[i]) {
            g.angle_defect[i] = 2 * kPi - angle_sum[i];
            if (g.area_mixed[i] > 0) g.K[i] = g.angle_defect[i] / g.area_mixed[i];
        }
    }
    // inward conormals from boundary edges
    for (size_t f = 0; f < nf; ++f) {
        const auto& tri = m.F[f];
        for (int j = 0; j < 3; ++j) {
            int e = t.face_edges[f][j];
            if (!t.is_boundary_edge(e)) continue;
            int a = tri[(j + 1) % 3], b = tri[(j + 2) % 3];
            Vec3 tv = m.V[b] - m.V[a];
            Vec3 inward = g.face_normal[f].cross(tv);
            double l = inward.norm();
            if (l > 0) inward /= l;
            g.conormal[a] += inward;
            g.conormal[b] += inward;
        }
    }
    for (size_t i = 0; i < n; ++i) {
        double l = g.conormal[i].norm();
        if (l > 0) g.conormal[i] /= l;
    }
    g.A2 = shape_operator_norm2(m, t, g.normal);
    return g;
}

}  // namespace expander
