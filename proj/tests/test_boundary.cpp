#include "expander/boundary.hpp"
#include "expander/symmetry.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace expander;

TEST_CASE("three leaf circles form an admissible invariant boundary") {
    SymmetryGroup g = build_group(3);
    BoundarySpec b = make_circles_boundary(0.05, 2.0, 256);
    ValidationReport r = validate_boundary(b, &g);
    CHECK(r.admissible);
    CHECK(r.invariance_residual <= r.invariance_tol);
    for (const auto& c : b.curves) CHECK(std::abs(c.winding) == 1);
    CHECK(b.curves[1].pts[0].z() == 0.0);
    CHECK(b.curves[0].pts[0].z() == doctest::Approx(-b.curves[2].pts[0].z()).epsilon(1e-15));
    CHECK_THROWS_AS(make_circles_boundary(0.0, 2.0), Error);
}

TEST_CASE("eps_max grows with s and leaves the admissible class") {
    SymmetryGroup g = build_group(3);
    double prev = 0;
    for (double s : {0.025, 0.05, 0.1}) {
        BoundarySpec b = make_circles_boundary(s, 2.0, 128);
        validate_boundary(b, &g);
        CHECK(b.eps_max > prev);
        prev = b.eps_max;
    }
    BoundarySpec big = make_circles_boundary(0.5, 2.0, 128);
    ValidationReport r = validate_boundary(big, &g);
    CHECK_FALSE(r.region_ok);
    CHECK_FALSE(r.admissible);
}

TEST_CASE("breaking the symmetry is detected") {
    SymmetryGroup g = build_group(3);
    BoundarySpec b = make_circles_boundary(0.05, 2.0, 128);
    // tilt the upper circle slightly, staying on the sphere
    for (auto& p : b.curves[0].pts) {
        double t = std::atan2(p.y(), p.x());
        double z = p.z() * (1 + 0.2 * std::cos(t));
        double rho = std::sqrt(4.0 - z * z);
        p = Vec3(rho * std::cos(t), rho * std::sin(t), z);
    }
    ValidationReport r = validate_boundary(b, &g);
    CHECK(r.on_sphere);
    CHECK_FALSE(r.invariant);
    CHECK_FALSE(r.admissible);
}

TEST_CASE("wiggled cone boundary is G3 invariant") {
    SymmetryGroup g = build_group(3);
    BoundarySpec b = make_cone_boundary(wiggled_link(), 1.0, 3);
    ValidationReport r = validate_boundary(b, &g);
    CHECK(r.invariant);
    CHECK(r.winding_ok);
    CHECK(r.admissible);
}

TEST_CASE("Gamma bounds the odd sectors of the annulus") {
    int k = 3;
    double R = 2.0, eps = 0.04;
    GammaCurve gm = make_gamma(k, R, eps, 256, 64);
    CHECK(polyline_is_simple_xy(gm.pts));
    CHECK(total_turning_xy(gm.pts) == doctest::Approx(2 * kPi).epsilon(1e-10));
    // k sectors of opening pi/k between radii eps and R
    double exact = 0.5 * kPi * (R * R - eps * eps);
    CHECK(std::abs(polygon_area_xy(gm.pts) - exact) / exact < 1e-3);
}

TEST_CASE("winding numbers") {
    std::vector<Vec3> c;
    for (int i = 0; i < 50; ++i) c.emplace_back(std::cos(2 * kPi * i / 50), std::sin(2 * kPi * i / 50), 0.1);
    CHECK(winding_number(c) == 1);
    std::reverse(c.begin(), c.end());
    CHECK(winding_number(c) == -1);
    std::vector<Vec3> off;
    for (const auto& p : c) off.push_back(p + Vec3(3, 0, 0));
    CHECK(winding_number(off) == 0);
}
