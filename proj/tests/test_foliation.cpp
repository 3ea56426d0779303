#include "expander/foliation.hpp"
#include "expander/mesh.hpp"
#include "expander/solver.hpp"

#include <doctest.h>

#include <cmath>

using namespace expander;

namespace {

// z = f_s(|x|) on a regular grid over [-L, L]^2, all diagonals one way.
TriMesh leaf_graph(const ProfileCurve& c, double L, int n) {
    TriMesh m;
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) {
            double x = -L + 2 * L * i / n, y = -L + 2 * L * j / n;
            VertexTag t;
            if (i == 0 || j == 0 || i == n || j == n) t.curve = curve::kGeneric;
            m.add_vertex(Vec3(x, y, c.eval(std::hypot(x, y))), t);
        }
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            int a = j * (n + 1) + i, b = a + 1, d = a + n + 1, e = d + 1;
            m.F.push_back({a, b, e});
            m.F.push_back({a, e, d});
        }
    return m;
}

}  // namespace

TEST_CASE("radial ODE right-hand side is the graph expander equation") {
    // f''/(1+f'^2) + f'/r = (f - r f')/2 for a rotational graph z = f(r)
    for (double r : {0.3, 1.0, 4.0})
        for (double f : {-0.5, 0.2})
            for (double fp : {-0.4, 0.0, 1.3}) {
                double fpp = radial_fpp(r, f, fp);
                CHECK(fpp / (1 + fp * fp) + fp / r == doctest::Approx(0.5 * (f - r * fp)).epsilon(1e-13));
            }
}

TEST_CASE("leaves: ODE residual, ordering and cone bound") {
    ProfileCurve a = integrate_profile(0.1, 10), b = integrate_profile(0.5, 10), c = integrate_profile(1.0, 10);
    for (const ProfileCurve* p : {&a, &b, &c}) {
        CHECK(profile_ode_residual(*p) < 1e-8);
        CHECK(p->epsilon_converged);
        CHECK(p->f[0] == doctest::Approx(p->s).epsilon(1e-14));
    }
    bool ordered = true, cone = true;
    for (size_t i = 0; i < a.size(); ++i) {
        ordered = ordered && a.f[i] < b.f[i] && b.f[i] < c.f[i];
        double r = i * a.dr;
        if (r > 0) cone = cone && a.f[i] > a.epsilon * r && c.f[i] > c.epsilon * r;
    }
    CHECK(ordered);
    CHECK(cone);
}

TEST_CASE("negative leaves mirror positive ones") {
    ProfileCurve p = integrate_profile(0.3, 5), n = integrate_profile(-0.3, 5);
    for (size_t i = 0; i < p.size(); ++i) CHECK(n.f[i] == doctest::Approx(-p.f[i]).epsilon(1e-12));
    ProfileCurve z = integrate_profile(0.0, 5);
    for (double v : z.f) CHECK(v == 0.0);
}

TEST_CASE("a leaf graph meshed on a regular grid is a discrete expander") {
    ProfileCurve c = integrate_profile(0.5, 3);
    double r1 = expander_residual(leaf_graph(c, 1.0, 40)).max;
    double r2 = expander_residual(leaf_graph(c, 1.0, 80)).max;
    CHECK(r2 < 1e-3);
    // second order in h
    CHECK(r1 / r2 > 3.0);
}

TEST_CASE("zeta inverts the tabulated leaves") {
    FoliationTable t = build_table(-1, 1, 0.05, 10);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        double s = -0.95 + 1.9 * ((i * 37) % 100) / 99.0;
        double r = 9.5 * ((i * 53) % 100) / 99.0;
        double th = 0.7 * i;
        Vec3 p(r * std::cos(th), r * std::sin(th), t.interp(s, r));
        worst = std::max(worst, std::abs(zeta(p, t) - s));
    }
    CHECK(worst < 1e-6);
    CHECK_THROWS_AS(zeta(Vec3(11, 0, 0), t), Error);
}

TEST_CASE("leaf circles lie on the sphere") {
    for (double s : {-0.5, 0.0, 0.05, 0.5}) {
        LeafCircle c = circle_of_leaf(s, 2.0);
        CHECK(std::hypot(c.rho, c.z) == doctest::Approx(2.0).epsilon(1e-10));
        CHECK((c.z > 0) == (s > 0));
    }
    CHECK_THROWS_AS(circle_of_leaf(2.5, 2.0), Error);
}
