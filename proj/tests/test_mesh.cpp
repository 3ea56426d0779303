#include "expander/mesh.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace expander;

TEST_CASE("Euler characteristic and genus of closed and bounded meshes") {
    EulerInfo o = euler_and_genus(make_octahedron());
    CHECK(o.chi == 2);
    CHECK(o.b == 0);
    CHECK(o.g == 0);
    EulerInfo d = euler_and_genus(make_polar_disk(1.0, 6, 8));
    CHECK(d.chi == 1);
    CHECK(d.b == 1);
    CHECK(d.g == 0);
}

TEST_CASE("two disjoint disks count as two components") {
    TriMesh a = make_polar_disk(1.0, 4, 6);
    TriMesh b = make_polar_disk(1.0, 4, 6, Vec3(5, 0, 0));
    append_mesh(a, b);
    EulerInfo e = euler_and_genus(a);
    CHECK(e.components == 2);
    CHECK(e.chi == 2);
    CHECK(e.b == 2);
    auto per = component_euler(a);
    REQUIRE(per.size() == 2);
    CHECK(per[0].chi == 1);
}

TEST_CASE("triangle quality is 1 for equilateral triangles") {
    Vec3 a(0, 0, 0), b(1, 0, 0), c(0.5, std::sqrt(3.0) / 2, 0);
    CHECK(triangle_quality(a, b, c) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(triangle_quality(a, b, Vec3(2, 0, 0)) == doctest::Approx(0.0));
}

TEST_CASE("OBJ round trip keeps positions, faces and tags") {
    TriMesh m = make_polar_disk(1.0, 5, 6, Vec3::Zero(), curve::kMiddle);
    auto path = (std::filesystem::temp_directory_path() / "lab_roundtrip.obj").string();
    save_mesh(m, path);
    TriMesh r = load_mesh(path);
    REQUIRE(r.nv() == m.nv());
    REQUIRE(r.nf() == m.nf());
    double err = 0;
    for (size_t i = 0; i < m.nv(); ++i) err = std::max(err, (m.V[i] - r.V[i]).norm());
    CHECK(err == 0.0);
    for (size_t i = 0; i < m.nv(); ++i) CHECK(r.tags[i].curve == m.tags[i].curve);
}

TEST_CASE("malformed files raise ParseError") {
    auto path = (std::filesystem::temp_directory_path() / "lab_bad.ply").string();
    std::ofstream(path) << "not a ply\n";
    try {
        load_mesh(path);
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ParseError);
    }
}

TEST_CASE("flipping orientation twice is the identity") {
    TriMesh m = make_polar_disk(1.0, 3, 6);
    TriMesh f = m;
    flip_orientation(f);
    CHECK(f.F != m.F);
    flip_orientation(f);
    CHECK(f.F == m.F);
}

TEST_CASE("the y=0 slice of a disk is one segment") {
    SliceResult s = slice_y0(make_polar_disk(1.0, 8, 8));
    REQUIRE(s.curves.size() == 1);
    CHECK_FALSE(s.curves[0].closed);
    double xmin = 1e9, xmax = -1e9;
    for (const Vec3& p : s.curves[0].pts) {
        xmin = std::min(xmin, p.x());
        xmax = std::max(xmax, p.x());
    }
    CHECK(xmin == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(xmax == doctest::Approx(1.0).epsilon(1e-9));
}
