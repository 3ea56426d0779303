#include "expander/diagnostics.hpp"
#include "expander/geometry.hpp"
#include "expander/mesh.hpp"

#include <doctest.h>

#include <cmath>
#include <map>

using namespace expander;

namespace {

// r = cosh z over |z| <= a; nu rings of nu vertices, nt around.
TriMesh catenoid(double a, int nz, int nt) {
    TriMesh m;
    for (int i = 0; i <= nz; ++i) {
        double z = -a + 2 * a * i / nz;
        for (int j = 0; j < nt; ++j) {
            double t = 2 * kPi * (j + 0.5 * (i % 2)) / nt;
            m.add_vertex(Vec3(std::cosh(z) * std::cos(t), std::cosh(z) * std::sin(t), z));
        }
    }
    for (int i = 0; i < nz; ++i)
        for (int j = 0; j < nt; ++j) {
            int a0 = i * nt + j, a1 = i * nt + (j + 1) % nt;
            int b0 = (i + 1) * nt + j, b1 = (i + 1) * nt + (j + 1) % nt;
            if (i % 2 == 0) {
                m.F.push_back({a0, a1, b0});
                m.F.push_back({a1, b1, b0});
            } else {
                m.F.push_back({a0, b1, b0});
                m.F.push_back({a0, a1, b1});
            }
        }
    return m;
}

}  // namespace

TEST_CASE("catenoid total curvature matches 4 pi tanh a") {
    double a = 1.0;
    double exact = 4 * kPi * std::tanh(a);
    double coarse = std::abs(total_curvature(catenoid(a, 40, 80)) - exact);
    double fine = std::abs(total_curvature(catenoid(a, 80, 160)) - exact);
    CHECK(fine / exact < 0.02);
    CHECK(fine < coarse);
}

TEST_CASE("Gauss-Bonnet residual vanishes on flat meshes through the origin") {
    GaussBonnetResult d = gauss_bonnet_residual(make_polar_disk(2.0, 10, 8));
    CHECK(d.chi == 1);
    CHECK(std::abs(d.total_curvature) < 1e-12);
    CHECK(std::abs(d.support_term) < 1e-12);
    CHECK(std::abs(d.residual) < 1e-6);

    // annulus: turning of the two circles cancels
    TriMesh ann = make_polar_disk(2.0, 10, 8);
    TriMesh hole;
    for (const auto& f : ann.F) {
        bool inner = false;
        for (int v : f) inner = inner || ann.V[v].norm() < 0.5;
        if (!inner) hole.F.push_back(f);
    }
    hole.V = ann.V;
    hole.tags = ann.tags;
    // drop the unused centre vertices by compaction
    std::vector<int> map(hole.V.size(), -1);
    TriMesh c;
    for (auto& f : hole.F)
        for (int& v : f) {
            if (map[v] < 0) map[v] = c.add_vertex(hole.V[v]);
            v = map[v];
        }
    c.F = hole.F;
    GaussBonnetResult e = gauss_bonnet_residual(c);
    CHECK(e.chi == 0);
    CHECK(std::abs(e.residual) < 1e-6);
}

TEST_CASE("ball clipping of a flat triangle") {
    Vec3 a(-10, -10, 0), b(10, -10, 0), c(0, 10, 0);
    CHECK(triangle_ball_area(a, b, c, 1.0) == doctest::Approx(kPi).epsilon(1e-12));
    CHECK(triangle_ball_area(a, b, c, 100.0) == doctest::Approx(200.0).epsilon(1e-12));
    // plane at height 0.6 cuts a disk of radius 0.8
    Vec3 h(0, 0, 0.6);
    CHECK(triangle_ball_area(a + h, b + h, c + h, 1.0) == doctest::Approx(kPi * 0.64).epsilon(1e-12));
    // half plane x > 0 meets the unit disk in half of it
    Vec3 p(0, -10, 0), q(10, -10, 0), r(0, 10, 0), s(10, 10, 0);
    double half = triangle_ball_area(p, q, s, 1.0) + triangle_ball_area(p, s, r, 1.0);
    CHECK(half == doctest::Approx(kPi / 2).epsilon(1e-12));
    // a vertex on the sphere, the rest outside: only rounding decides in or out
    double t = kPi / 4;
    Vec3 on(0.5 * std::cos(t), 0.5 * std::sin(t), 0);
    Vec3 u(0.55 * std::cos(t + 0.05), 0.55 * std::sin(t + 0.05), 0), v(0.55 * std::cos(t - 0.05), 0.55 * std::sin(t - 0.05), 0);
    CHECK(triangle_ball_area(on, u, v, 0.5) < 1e-12);
    CHECK(triangle_ball_area(on, u, v, 0.5 * (1 + 1e-16)) < 1e-12);
}

TEST_CASE("cotangent mean curvature of a sphere") {
    // Delta x = -2 x / r^2 on the sphere of radius r; check the interior mean.
    TriMesh m = make_octahedron();
    for (int it = 0; it < 3; ++it) {
        TriMesh s;
        s.V = m.V;
        std::map<std::pair<int, int>, int> mid;
        auto midpoint = [&](int a, int b) {
            auto key = std::minmax(a, b);
            auto f = mid.find(key);
            if (f != mid.end()) return f->second;
            int id = s.add_vertex((m.V[a] + m.V[b]).normalized());
            mid[key] = id;
            return id;
        };
        s.tags.resize(s.V.size());
        for (const auto& f : m.F) {
            int ab = midpoint(f[0], f[1]), bc = midpoint(f[1], f[2]), ca = midpoint(f[2], f[0]);
            s.F.push_back({f[0], ab, ca});
            s.F.push_back({ab, f[1], bc});
            s.F.push_back({ca, bc, f[2]});
            s.F.push_back({ab, bc, ca});
        }
        m = s;
    }
    Topology t = build_topology(m);
    GeometryCache g = compute_geometry(m, t);
    double worst = 0;
    for (size_t i = 0; i < m.nv(); ++i) worst = std::max(worst, (g.mean_curvature[i] + 2 * m.V[i]).norm());
    CHECK(worst < 0.1);
}
