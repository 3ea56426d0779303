#include "expander/boundary.hpp"
#include "expander/csf.hpp"
#include "expander/symmetry.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace expander;

namespace {

CylinderCurve mode(int m, double a, int n) {
    CylinderCurve c;
    for (int j = 0; j < n; ++j) {
        double t = 2 * kPi * j / n;
        c.theta.push_back(t);
        c.z.push_back(a * std::sin(m * t));
    }
    return c;
}

}  // namespace

TEST_CASE("small graph modes decay like exp(-m^2 t)") {
    for (int m : {1, 3}) {
        CsfOptions o;
        o.T = m == 1 ? 1.0 : 0.2;
        o.samples = 4;
        double a = 0.01;
        CsfTrajectory tr = csf_run(mode(m, a, 256), o);
        for (size_t s = 0; s < tr.samples.size(); ++s) {
            double t = tr.sample_times[s];
            CHECK(max_abs_z(tr.samples[s]) == doctest::Approx(a * std::exp(-m * m * t)).epsilon(2e-3));
        }
    }
}

TEST_CASE("max |z| and length never increase") {
    CylinderCurve c = mode(2, 0.3, 200);
    for (size_t j = 0; j < c.size(); ++j) c.z[j] += 0.1 * std::cos(5 * c.theta[j]);
    CsfOptions o;
    o.T = 0.5;
    CsfTrajectory tr = csf_run(c, o);
    for (size_t i = 1; i < tr.step_max_z.size(); ++i) {
        CHECK(tr.step_max_z[i] <= tr.step_max_z[i - 1] * (1 + 1e-12) + 1e-15);
        CHECK(tr.step_length[i] <= tr.step_length[i - 1] * (1 + 1e-12) + 1e-15);
    }
    for (const auto& s : tr.samples) CHECK(is_embedded(s));
}

TEST_CASE("explicit step size beyond the bound is refused") {
    CsfOptions o;
    o.dt = 1.0;
    CHECK_THROWS_AS(csf_run(mode(1, 0.1, 64), o), Error);
}

TEST_CASE("cylinder chart round trip, both orientations") {
    std::vector<Vec3> pts;
    for (int j = 0; j < 100; ++j) {
        double t = 2 * kPi * j / 100;
        double z = 0.1 + 0.05 * std::sin(3 * t);
        pts.push_back(Vec3(std::cos(t), std::sin(t), z).normalized() * 2.0);
    }
    for (bool reverse : {false, true}) {
        std::vector<Vec3> in = pts;
        if (reverse) std::reverse(in.begin(), in.end());
        bool flipped = false;
        CylinderCurve c = to_cylinder(in, &flipped);
        CHECK(flipped == reverse);
        std::vector<Vec3> out = from_cylinder(c, 2.0, flipped);
        double err = 0;
        for (size_t i = 0; i < in.size(); ++i) err = std::max(err, (out[i] - in[i]).norm());
        CHECK(err < 1e-13);
    }
    std::vector<Vec3> off;
    for (const auto& p : pts) off.push_back(p + Vec3(5, 0, 0));
    CHECK_THROWS_AS(to_cylinder(off), Error);
}

TEST_CASE("short homotopy of the wiggled triple keeps the symmetry") {
    SymmetryGroup g = build_group(3);
    BoundarySpec spec = make_cone_boundary(wiggled_link(144), 1.0, 3);
    HomotopyResult h = homotopy_to_circles(spec, 2, &g, 0.5);
    CHECK(h.path.size() == 3);
    CHECK(h.max_z_monotone);
    CHECK(h.winding_preserved);
    CHECK(h.lengths_monotone);
    CHECK(h.max_invariance_residual < 1e-9);
}
