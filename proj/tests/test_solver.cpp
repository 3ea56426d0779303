#include "expander/kernels.hpp"
#include "expander/mesh.hpp"
#include "expander/seeds.hpp"
#include "expander/solver.hpp"
#include "expander/stability.hpp"
#include "expander/symmetry.hpp"

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include <cmath>

using namespace expander;

namespace {

// Smallest Dirichlet eigenvalue of -(u'' + u'/r + r u'/2) + (m^2/r^2 + 1/2) u on
// [0, R], the Fourier mode m of -L on a flat disk through the origin.
double radial_mode_eigenvalue(int m, double R, int N) {
    double h = R / N;
    auto w = [](double r) { return r * std::exp(r * r / 4); };
    Eigen::VectorXd d(N - 1), e(N - 2);
    for (int i = 1; i < N; ++i) {
        double r = i * h;
        double pl = w(r - h / 2), pr = w(r + h / 2), q = w(r);
        d[i - 1] = ((pl + pr) / (h * h) + q * (m * m / (r * r) + 0.5)) / q;
        if (i < N - 1) e[i - 1] = -pr / (h * h) / std::sqrt(q * w(r + h));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s;
    s.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
    return s.eigenvalues()[0];
}

}  // namespace

TEST_CASE("weighted area gradient is the first variation") {
    TriMesh m = seed_disk(3, 2.0);
    for (size_t i = 0; i < m.nv(); ++i) m.V[i].z() += 0.05 * std::sin(3.0 * m.V[i].x() + 2.0 * m.V[i].y());
    std::vector<Vec3> g;
    weighted_area_gradient_serial(m.V, m.F, g);
    double worst = 0;
    const double h = 1e-6;
    for (size_t i = 0; i < m.nv(); i += 97)
        for (int c = 0; c < 3; ++c) {
            std::vector<Vec3> P = m.V, Q = m.V;
            P[i][c] += h;
            Q[i][c] -= h;
            double fd = (weighted_area_serial(P, m.F) - weighted_area_serial(Q, m.F)) / (2 * h);
            worst = std::max(worst, std::abs(fd - g[i][c]) / std::max(1e-3, std::abs(g[i][c])));
        }
    CHECK(worst < 1e-5);
}

TEST_CASE("a perturbed disk relaxes to the flat expander") {
    SymmetryGroup g = build_group(3);
    TriMesh m = seed_disk(3, 2.0);
    for (size_t i = 0; i < m.nv(); ++i)
        if (!m.tags[i].fixed()) {
            const Vec3& p = m.V[i];
            double th = std::atan2(p.y(), p.x()), r = p.norm();
            m.V[i].z() = 0.1 * (4 - r * r) * r * std::cos(3 * th);
        }
    m = symmetrize_mesh(m, g);
    SolveResult r = minimize(m, g);
    CHECK(r.converged);
    CHECK(r.residual_max < 1e-3);
    double zmax = 0;
    for (const Vec3& p : r.mesh.V) zmax = std::max(zmax, std::abs(p.z()));
    CHECK(zmax < 1e-3);
    // area decreases along the run
    REQUIRE(r.history.size() >= 2);
    CHECK(r.history.back().area <= r.history.front().area);
}

TEST_CASE("invalid seeds are rejected") {
    CHECK_THROWS_AS(seed_disk(0, 2.0), Error);
}

TEST_CASE("flat disk Jacobi eigenvalue matches the radial mode") {
    SymmetryGroup g = build_group(3);
    double oracle = radial_mode_eigenvalue(3, 2.0, 4000);
    // the invariant normal variations of the flat disk are spanned by sin(3(2j+1) theta) modes
    CHECK(oracle < radial_mode_eigenvalue(9, 2.0, 4000));
    StabilityResult coarse = jacobi_min_eigenvalue(seed_disk(3, 2.0), &g);
    SeedOptions fine;
    fine.refine = 2;
    StabilityResult s = jacobi_min_eigenvalue(seed_disk(3, 2.0, fine), &g);
    CHECK(s.converged);
    CHECK(std::abs(s.lambda_min - oracle) / oracle < 0.02);
    CHECK(std::abs(s.lambda_min - oracle) <= std::abs(coarse.lambda_min - oracle) + 1e-9);
}

TEST_CASE("generalized eigenvalue of a small known system") {
    // A = diag(3, 1, 2), Mr = diag(1, 0.5, 4): eigenvalues 3, 2, 0.5
    SpMat A(3, 3);
    A.insert(0, 0) = 3;
    A.insert(1, 1) = 1;
    A.insert(2, 2) = 2;
    Eigen::VectorXd M(3);
    M << 1, 0.5, 4;
    StabilityResult r = smallest_generalized_eigenvalue(A, M);
    CHECK(r.lambda_min == doctest::Approx(0.5).epsilon(1e-9));
}
