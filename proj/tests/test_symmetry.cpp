#include "expander/mesh.hpp"
#include "expander/seeds.hpp"
#include "expander/symmetry.hpp"

#include <doctest.h>

#include <cmath>

using namespace expander;

TEST_CASE("G_k has order 4k and is closed") {
    for (int k : {1, 2, 3, 5}) {
        SymmetryGroup g = build_group(k);
        CHECK(g.order() == static_cast<size_t>(4 * k));
        for (const Mat3& a : g.elements) {
            CHECK((a * a.transpose() - Mat3::Identity()).norm() < 1e-12);
            for (const Mat3& b : g.elements) CHECK(g.find(a * b) >= 0);
        }
    }
}

TEST_CASE("G_k fixes the Q lines up to sign and the vertical mirrors") {
    SymmetryGroup g = build_group(3);
    for (const Vec3& q : g.q_lines) {
        CHECK(std::abs(q.z()) < 1e-15);
        double th = std::atan2(q.y(), q.x());
        double odd = th / (kPi / 6);
        CHECK(std::abs(odd - std::round(odd)) < 1e-12);
        CHECK(static_cast<long>(std::lround(odd)) % 2 != 0);
        CHECK(g.find(rotation_pi_about_horizontal(th)) >= 0);
    }
    CHECK(g.find(reflection_vertical_plane(0.0)) >= 0);
    CHECK(g.find(reflection_vertical_plane(kPi / 3)) >= 0);
    // z mirror is not in G_k: it would swap the upper and lower circles
    CHECK(g.find(reflection_z()) < 0);
}

TEST_CASE("subgroups follow divisibility") {
    // G_k sits in G_pk for odd p only: the Q lines must stay odd multiples of pi/(2pk)
    CHECK(is_subgroup(3, 9));
    CHECK(is_subgroup(1, 5));
    CHECK_FALSE(is_subgroup(3, 6));
    CHECK_FALSE(is_subgroup(2, 3));
    CHECK_THROWS_AS(is_subgroup(4, 3), Error);
}

TEST_CASE("symmetrize_mesh gives an exact fixed point") {
    SymmetryGroup g = build_group(3);
    TriMesh m = seed_disk(3, 2.0);
    // cos 3 theta is even across P_0 and odd under the pi rotations about Q
    // lines, so the graph is invariant; the noise is far below the matching tolerance
    for (size_t i = 0; i < m.nv(); ++i)
        if (!m.tags[i].fixed()) {
            const Vec3& p = m.V[i];
            m.V[i].z() = 0.1 * std::cos(3 * std::atan2(p.y(), p.x())) * p.squaredNorm() + 1e-12 * std::sin(7.0 * i);
        }
    CHECK(symmetry_defect(m.V, g, discover_action(m, g)) > 1e-13);
    TriMesh s = symmetrize_mesh(m, g);
    VertexAction act = discover_action(s, g);
    CHECK(symmetry_defect(s.V, g, act) < 1e-12);
}

TEST_CASE("q_points lie on the Q lines") {
    QPoints q = q_points(3, 0.5);
    REQUIRE(q.points.size() == 6);
    for (const Vec3& p : q.points) CHECK(std::abs(p.norm() - 0.5) < 1e-14);
}
