#include "expander/model_surface.hpp"

#include <doctest.h>

#include <cmath>

using namespace expander;

TEST_CASE("chart and normal are inverse stereographic maps") {
    for (Complex w : {Complex(0.3, -0.2), Complex(-0.7, 0.1), Complex(0, 0)}) {
        Vec3 n = normal_of_chart(w);
        CHECK(n.norm() == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(std::abs(chart_of_normal(n) - w) < 1e-14);
    }
}

TEST_CASE("closed form u agrees with Poisson quadrature of the arc data") {
    for (Complex w : {Complex(0.3, 0.2), Complex(-0.5, -0.4), Complex(0.1, 0.8), Complex(0, 0)}) {
        CHECK(poisson_u(w, 200000) == doctest::Approx(model_u(w)).epsilon(1e-5));
        CHECK(model_u(w) >= -1.0);
        CHECK(model_u(w) <= 1.0);
    }
    CHECK(std::abs(model_u(Complex(0, 0))) < 1e-15);
}

TEST_CASE("F' is the derivative of u + i u*") {
    Complex w(0.2, -0.3);
    double h = 1e-6;
    auto F = [](Complex v) { return Complex(model_u(v), model_ustar(v)); };
    Complex fd = (F(w + h) - F(w - h)) / (2 * h);
    CHECK(std::abs(fd - model_dF(w)) < 1e-7);
}

TEST_CASE("grid harmonic field") {
    ModelChart c = harmonic_field(128);
    CHECK(c.min_u >= -1.0);
    CHECK(c.max_u <= 1.0);
    CHECK(c.u_at(c.n / 2, c.n / 2) == doctest::Approx(0.0).epsilon(1e-15));
    // five point Laplacian of the exact field: second order
    CHECK(harmonic_field(256).laplacian_residual < c.laplacian_residual / 3.5);
    CHECK_THROWS_AS(harmonic_field(16), Error);
}

TEST_CASE("reconstruction matches the closed form x coordinate") {
    ModelChart c = harmonic_field(64);
    ModelOptions o;
    o.resolution = 64;
    o.T = 2.0;
    ModelSurface s = weierstrass_reconstruct(c, o);
    REQUIRE(s.zeta.size() == s.mesh.nv());
    double worst = 0;
    for (size_t i = 0; i < s.mesh.nv(); ++i) {
        Complex w = Complex(0, 1) * std::tanh(s.zeta[i] / 2.0);
        double x = std::real(2.0 / (kPi * (w - 1.0))) + 1 / kPi;
        worst = std::max(worst, std::abs(s.mesh.V[i].x() - x) / std::max(1.0, std::abs(x)));
    }
    CHECK(worst < 1e-10);
    CHECK(s.period_mismatch < 1e-9);
    CHECK(s.height_mismatch < 1e-9);
}

TEST_CASE("model surface at modest resolution") {
    ModelChart c = harmonic_field(128);
    ModelOptions o;
    o.resolution = 128;
    ModelSurface s = weierstrass_reconstruct(c, o);
    ModelChecks k = model_checks(c, s);
    CHECK(k.degrees.d_plus == 0);
    CHECK(k.degrees.d_minus == 1);
    CHECK(k.axis_deviation < 1e-9);
    CHECK(k.line_deviation < 1e-9);
    CHECK(k.minimality_residual < 5e-3);
}
