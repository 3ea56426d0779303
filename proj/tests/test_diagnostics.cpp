#include "expander/boundary.hpp"
#include "expander/cone_tracking.hpp"
#include "expander/diagnostics.hpp"
#include "expander/mesh.hpp"
#include "expander/report.hpp"
#include "expander/seeds.hpp"
#include "expander/solver.hpp"
#include "expander/symmetry.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <doctest.h>

#include <cmath>

using namespace expander;

namespace {

// K(0.05), solved once and shared by the cases below.
const TriMesh& solved_k3() {
    static const TriMesh m = [] {
        SymmetryGroup g = build_group(3);
        SolveResult pre = minimize(reflect_union(seed_annulus(0.05, 0.04, 3, 2.0), 3), g);
        return minimize(cap_hole(pre.mesh), g).mesh;
    }();
    return m;
}

}  // namespace

TEST_CASE("phi normalization integrates to one over a plane") {
    auto f = [](double r) { return r < 0.5 ? std::exp(-1.0 / (1.0 - 4.0 * r * r)) * r : 0.0; };
    double I = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 0.5, 15, 1e-14);
    CHECK(kPhiNormalization * 2 * kPi * I == doctest::Approx(1.0).epsilon(1e-10));
    SizeResult s = size_class(make_polar_disk(2.0, 60, 12));
    CHECK(s.phi_integral == doctest::Approx(1.0).epsilon(1e-4));
    CHECK_FALSE(s.big);
}

TEST_CASE("meshes away from the origin have no phi mass") {
    SizeResult s = size_class(make_polar_disk(1.0, 10, 8, Vec3(0, 0, 3)));
    CHECK(s.phi_integral == 0.0);
    CHECK_FALSE(s.big);
    CHECK(s.dichotomy_ok);
}

TEST_CASE("monotonicity series of a flat disk is constant") {
    MonotonicityResult m = monotonicity_series(make_polar_disk(2.0, 40, 12), {0.5, 1.0, 1.5, 1.9});
    CHECK(m.monotone_ok);
    for (const auto& e : m.series) {
        CHECK_FALSE(e.excluded);
        CHECK(e.ratio == doctest::Approx(1.0).epsilon(2e-3));
    }
}

TEST_CASE("solved K(s) surface: topology, type and size") {
    const TriMesh& m = solved_k3();
    EulerInfo e = euler_and_genus(m);
    CHECK(e.b == 3);
    CHECK(e.g == 2);
    CHECK(classify_type(m) == SurfaceType::Type1);
    SizeResult s = size_class(m);
    CHECK(s.phi_integral < 4.0 / 3.0);
    CHECK(expander_residual(m).max < 1e-3);
}

TEST_CASE("z mirror exchanges the types, the literal composition does not") {
    const TriMesh& m = solved_k3();
    double r0 = expander_residual(m).max;
    TriMesh mirror = transform_mesh(m, reflection_z(), true);
    CHECK(classify_type(mirror) == SurfaceType::Type2);
    CHECK(std::abs(expander_residual(mirror).max - r0) < 1e-12);
    // the rotation by pi/3 is not a symmetry of K(s), and composing with it
    // moves the y=0 slice onto the other half plane, which keeps Type1.
    // Neither matrix is exact in binary; the rotation by 2 pi/3, an element of
    // G_3, sets the rounding floor for the residual change.
    TriMesh literal = transform_mesh(m, reflection_z() * rotation_z(kPi / 3), true);
    double floor = std::abs(expander_residual(transform_mesh(m, rotation_z(2 * kPi / 3))).max - r0);
    CHECK(std::abs(expander_residual(literal).max - r0) <= 10 * std::max(floor, 1e-15));
    CHECK(classify_type(literal) == SurfaceType::Type1);
}

TEST_CASE("classification needs three loops") {
    CHECK_THROWS_AS(classify_type(make_polar_disk(1.0, 4, 6)), Error);
}

TEST_CASE("rolling ball radius of the three circle cone") {
    BoundarySpec b = make_circles_boundary(0.05, 2.0, 256);
    const Vec3& p = b.curves[0].pts[0];
    double a = p.z() / std::hypot(p.x(), p.y());
    double oracle = a / (1 + std::sqrt(1 + a * a));
    RollingBall rb = rolling_ball_lambda(cone_from_boundary(b));
    CHECK(rb.conclusive);
    CHECK(std::abs(rb.lambda - oracle) / oracle < 1e-3);
    CHECK(eta_bound(rb.lambda) == doctest::Approx(16 / rb.lambda));
}

TEST_CASE("cone tracking of the solved surface") {
    BoundarySpec b = make_circles_boundary(0.05, 2.0, 256);
    ConeTrackingResult c = cone_tracking_checks(solved_k3(), cone_from_boundary(b));
    CHECK(c.eta_ok);
    CHECK(c.max_pdist <= c.eta);
    CHECK(c.r_c > 2.0);
}

TEST_CASE("flat disk report and JSON round trip") {
    DiagnosticsOptions o;
    o.R = 2.0;
    DiagnosticsReport d = run_diagnostics(make_polar_disk(2.0, 60, 12), o);
    nlohmann::ordered_json j = report_json(d);
    CHECK(j["schema_version"] == kReportSchemaVersion);
    CHECK(j["genus"] == 0);
    CHECK(j["type"] == "Other");
    CHECK(j["size"] == "Small");
    CHECK(j["phi_integral"].get<double>() == doctest::Approx(1.0).epsilon(1e-4));
    std::string text = emit_report(d);
    auto back = nlohmann::ordered_json::parse(text);
    CHECK(back == j);
    CHECK(back.dump(2) + "\n" == text);
    // field order is part of the format
    CHECK(j.begin().key() == "schema_version");
}

TEST_CASE("k=3 report carries the 4 pi k comparison") {
    DiagnosticsOptions o;
    o.k = 3;
    o.R = 2.0;
    DiagnosticsReport d = run_diagnostics(solved_k3(), o);
    nlohmann::ordered_json j = report_json(d);
    REQUIRE(j.contains("total_curvature"));
    CHECK(j["total_curvature_limit"]["target_4pik"].get<double>() == doctest::Approx(12 * kPi));
    CHECK(j["gauss_bonnet"]["relative"].get<double>() < 0.02);
    // booleans follow from the stored numbers
    CHECK(j["dichotomy"]["boundary_admissible"].get<bool>() ==
          (j["dichotomy"]["eps_max"].get<double>() <= j["dichotomy"]["eps_star"].get<double>()));
}
