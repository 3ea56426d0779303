#include "expander/kernels.hpp"

#include <cmath>

namespace expander {

VertexFaces build_vertex_faces(const std::vector<std::array<int, 3>>& F, size_t nv) {
    VertexFaces vf;
    vf.offset.assign(nv + 1, 0);
    for (const auto& f : F)
        for (int v : f) ++vf.offset[v + 1];
    for (size_t i = 0; i < nv; ++i) vf.offset[i + 1] += vf.offset[i];
    vf.face.resize(vf.offset[nv]);
    vf.corner.resize(vf.offset[nv]);
    std::vector<int> fill(vf.offset.begin(), vf.offset.end() - 1);
    for (size_t f = 0; f < F.size(); ++f)
        for (int j = 0; j < 3; ++j) {
            int p = fill[F[f][j]]++;
            vf.face[p] = static_cast<int>(f);
            vf.corner[p] = j;
        }
    return vf;
}

namespace {

inline double face_weighted_area(const Vec3& a, const Vec3& b, const Vec3& c) {
    Vec3 ctr = (a + b + c) / 3.0;
    return weight(ctr) * 0.5 * (b - a).cross(c - a).norm();
}

// gradient of the weighted area of one face with respect to its corners
inline void face_gradient(const Vec3& a, const Vec3& b, const Vec3& c, Vec3 g[3]) {
    Vec3 cr = (b - a).cross(c - a);
    double l = cr.norm();
    Vec3 ctr = (a + b + c) / 3.0;
    double w = weight(ctr);
    if (l <= 0) {
        g[0] = g[1] = g[2] = Vec3::Zero();
        return;
    }
    Vec3 n = cr / l;
    double area = 0.5 * l;
    Vec3 gw = w * ctr / 6.0 * area;
    g[0] = w * 0.5 * n.cross(c - b) + gw;
    g[1] = w * 0.5 * n.cross(a - c) + gw;
    g[2] = w * 0.5 * n.cross(b - a) + gw;
}

}  // namespace

double weighted_area_serial(const std::vector<Vec3>& V, const std::vector<std::array<int, 3>>& F) {
    double s = 0;
    for (const auto& f : F) s += face_weighted_area(V[f[0]], V[f[1]], V[f[2]]);
    return s;
}

double weighted_area_parallel(const std::vector<Vec3>& V, const std::vector<std::array<int, 3>>& F) {
    const long nf = static_cast<long>(F.size());
    std::vector<double> per(nf);
#pragma omp parallel for schedule(static)
    for (long f = 0; f < nf; ++f) per[f] = face_weighted_area(V[F[f][0]], V[F[f][1]], V[F[f][2]]);
    double s = 0;
    for (double v : per) s += v;
    return s;
}

void weighted_area_gradient_serial(const std::vector<Vec3>& V, const std::vector<std::array<int, 3>>& F, std::vector<Vec3>& grad) {
    grad.assign(V.size(), Vec3::Zero());
    Vec3 g[3];
    for (const auto& f : F) {
        face_gradient(V[f[0]], V[f[1]], V[f[2]], g);
        for (int j = 0; j < 3; ++j) grad[f[j]] += g[j];
    }
}

void weighted_area_gradient_parallel(const std::vector<Vec3>& V, const std::vector<std::array<int, 3>>& F, const VertexFaces& vf,
                                     std::vector<Vec3>& grad) {
    const long nf = static_cast<long>(F.size());
    std::vector<Vec3> per(3 * nf);
#pragma omp parallel for schedule(static)
    for (long f = 0; f < nf; ++f) face_gradient(V[F[f][0]], V[F[f][1]], V[F[f][2]], &per[3 * f]);
    const long nv = static_cast<long>(V.size());
    grad.resize(V.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < nv; ++i) {
        Vec3 s = Vec3::Zero();
        for (int p = vf.offset[i]; p < vf.offset[i + 1]; ++p) s += per[3 * vf.face[p] + vf.corner[p]];
        grad[i] = s;
    }
}

void vertex_normals_serial(const std::vector<Vec3>& V, const std::vector<std::array<int, 3>>& F, std::vector<Vec3>& N,
                           std::vector<double>& area) {
    N.assign(V.size(), Vec3::Zero());
    area.assign(V.size(), 0.0);
    for (const auto& f : F) {
        Vec3 cr = (V[f[1]] - V[f[0]]).cross(V[f[2]] - V[f[0]]);
        double a = cr.norm() / 6.0;
        for (int v : f) {
            N[v] += cr;
            area[v] += a;
        }
    }
    for (auto& n : N) {
        double l = n.norm();
        if (l > 0) n /= l;
    }
}

void vertex_normals_parallel(const std::vector<Vec3>& V, const std::vector<std::array<int, 3>>& F, const VertexFaces& vf,
                             std::vector<Vec3>& N, std::vector<double>& area) {
    const long nf = static_cast<long>(F.size());
    std::vector<Vec3> cr(nf);
#pragma omp parallel for schedule(static)
    for (long f = 0; f < nf; ++f) cr[f] = (V[F[f][1]] - V[F[f][0]]).cross(V[F[f][2]] - V[F[f][0]]);
    const long nv = static_cast<long>(V.size());
    N.resize(V.size());
    area.resize(V.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < nv; ++i) {
        Vec3 s = Vec3::Zero();
        double a = 0;
        for (int p = vf.offset[i]; p < vf.offset[i + 1]; ++p) {
            s += cr[vf.face[p]];
            a += cr[vf.face[p]].norm() / 6.0;
        }
        double l = s.norm();
        N[i] = l > 0 ? Vec3(s / l) : s;
        area[i] = a;
    }
}

std::vector<double> mixed_areas(const std::vector<Vec3>& V, const std::vector<std::array<int, 3>>& F) {
    std::vector<double> A(V.size(), 0.0);
    for (const auto& f : F) {
        const Vec3* P[3] = {&V[f[0]], &V[f[1]], &V[f[2]]};
        double area = 0.5 * (*P[1] - *P[0]).cross(*P[2] - *P[0]).norm();
        if (area <= 0) continue;
        double cot[3];
        bool obtuse = false;
        int obtuse_at = -1;
        for (int j = 0; j < 3; ++j) {
            Vec3 u = *P[(j + 1) % 3] - *P[j], v = *P[(j + 2) % 3] - *P[j];
            double d = u.dot(v);
            cot[j] = d / u.cross(v).norm();
            if (d < 0) obtuse = true, obtuse_at = j;
        }
        for (int j = 0; j < 3; ++j) {
            if (obtuse) {
                A[f[j]] += (j == obtuse_at) ? 0.5 * area : 0.25 * area;
            } else {
                const Vec3 &p = *P[j], &q = *P[(j + 1) % 3], &r = *P[(j + 2) % 3];
                A[f[j]] += 0.125 * ((q - p).squaredNorm() * cot[(j + 2) % 3] + (r - p).squaredNorm() * cot[(j + 1) % 3]);
            }
        }
    }
    return A;
}

}  // namespace expander
