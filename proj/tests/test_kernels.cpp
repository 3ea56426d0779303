#include "expander/kernels.hpp"
#include "expander/mesh.hpp"
#include "expander/seeds.hpp"

#include <doctest.h>

#include <cmath>

using namespace expander;

namespace {

TriMesh bumpy() {
    SeedOptions o;
    o.refine = 2;
    TriMesh m = seed_disk(3, 2.0, o);
    for (auto& p : m.V) p.z() = 0.3 * std::sin(2 * p.x()) * std::cos(p.y());
    return m;
}

}  // namespace

TEST_CASE("parallel kernels match the serial reference bit for bit") {
    TriMesh m = bumpy();
    VertexFaces vf = build_vertex_faces(m.F, m.nv());
    CHECK(weighted_area_serial(m.V, m.F) == weighted_area_parallel(m.V, m.F));
    std::vector<Vec3> gs, gp, ns, np;
    std::vector<double> as, ap;
    weighted_area_gradient_serial(m.V, m.F, gs);
    weighted_area_gradient_parallel(m.V, m.F, vf, gp);
    REQUIRE(gs.size() == gp.size());
    bool same = true;
    for (size_t i = 0; i < gs.size(); ++i) same = same && gs[i] == gp[i];
    CHECK(same);
    vertex_normals_serial(m.V, m.F, ns, as);
    vertex_normals_parallel(m.V, m.F, vf, np, ap);
    same = true;
    for (size_t i = 0; i < ns.size(); ++i) same = same && ns[i] == np[i] && as[i] == ap[i];
    CHECK(same);
}

TEST_CASE("weighted area of a triangle at the origin is its area") {
    std::vector<Vec3> V = {Vec3(-1, -1, 0), Vec3(2, -1, 0), Vec3(-1, 2, 0)};
    std::vector<std::array<int, 3>> F = {{0, 1, 2}};
    CHECK(weighted_area_serial(V, F) == doctest::Approx(4.5).epsilon(1e-15));
    // translated away from the origin the weight is larger than one
    for (auto& p : V) p += Vec3(0, 0, 1);
    CHECK(weighted_area_serial(V, F) == doctest::Approx(4.5 * std::exp(0.25)).epsilon(1e-15));
}

TEST_CASE("mixed areas partition the surface area") {
    TriMesh m = bumpy();
    std::vector<double> a = mixed_areas(m.V, m.F);
    double sum = 0, total = 0;
    for (double x : a) sum += x;
    for (const auto& f : m.F) total += triangle_area(m.V[f[0]], m.V[f[1]], m.V[f[2]]);
    CHECK(sum == doctest::Approx(total).epsilon(1e-12));
}
