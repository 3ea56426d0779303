// Serial reference vs OpenMP kernels on a refined bumpy disk.
#include "expander/kernels.hpp"
#include "expander/mesh.hpp"
#include "expander/seeds.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace expander;

namespace {

const TriMesh& mesh() {
    static const TriMesh m = [] {
        SeedOptions o;
        o.refine = 4;
        TriMesh d = seed_disk(3, 2.0, o);
        for (auto& p : d.V) p.z() = 0.3 * std::sin(2 * p.x()) * std::cos(p.y());
        return d;
    }();
    return m;
}

void BM_area_serial(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(weighted_area_serial(mesh().V, mesh().F));
}
void BM_area_parallel(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(weighted_area_parallel(mesh().V, mesh().F));
}
void BM_gradient_serial(benchmark::State& st) {
    std::vector<Vec3> g;
    for (auto _ : st) {
        weighted_area_gradient_serial(mesh().V, mesh().F, g);
        benchmark::DoNotOptimize(g.data());
    }
}
void BM_gradient_parallel(benchmark::State& st) {
    VertexFaces vf = build_vertex_faces(mesh().F, mesh().nv());
    std::vector<Vec3> g;
    for (auto _ : st) {
        weighted_area_gradient_parallel(mesh().V, mesh().F, vf, g);
        benchmark::DoNotOptimize(g.data());
    }
}
void BM_normals_serial(benchmark::State& st) {
    std::vector<Vec3> n;
    std::vector<double> a;
    for (auto _ : st) {
        vertex_normals_serial(mesh().V, mesh().F, n, a);
        benchmark::DoNotOptimize(n.data());
    }
}
void BM_normals_parallel(benchmark::State& st) {
    VertexFaces vf = build_vertex_faces(mesh().F, mesh().nv());
    std::vector<Vec3> n;
    std::vector<double> a;
    for (auto _ : st) {
        vertex_normals_parallel(mesh().V, mesh().F, vf, n, a);
        benchmark::DoNotOptimize(n.data());
    }
}

}  // namespace

BENCHMARK(BM_area_serial);
BENCHMARK(BM_area_parallel);
BENCHMARK(BM_gradient_serial);
BENCHMARK(BM_gradient_parallel);
BENCHMARK(BM_normals_serial);
BENCHMARK(BM_normals_parallel);

int main(int argc, char** argv) {
    mesh();  // build outside the timed loops
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
