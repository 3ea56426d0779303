#include "expander/stability.hpp"
#include "expander/geometry.hpp"
#include "expander/kernels.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>

namespace expander {

JacobiSystem jacobi_system(const TriMesh& mesh, const SymmetryGroup* group) {
    SymmetryGroup id = identity_group();
    const SymmetryGroup& G = group ? *group : id;
    VertexAction act = discover_action(mesh, G);
    VertexFaces vf = build_vertex_faces(mesh.F, mesh.nv());
    std::vector<Vec3> N;
    std::vector<double> area;
    vertex_normals_parallel(mesh.V, mesh.F, vf, N, area);
    Topology topo = build_topology(mesh);
    std::vector<double> A2 = shape_operator_norm2(mesh, topo, N);

    JacobiSystem js;
    js.basis = invariant_basis(mesh, G, act, N);
    const auto& free = js.basis.free;
    const int nf = static_cast<int>(free.size());
    WeightedOperators op = weighted_operators(mesh);
    std::vector<Eigen::Triplet<double>> trip;
    for (int k = 0; k < op.K.outerSize(); ++k)
        for (SpMat::InnerIterator it(op.K, k); it; ++it) {
            int r = js.basis.slot[it.row()], c = js.basis.slot[it.col()];
            if (r >= 0 && c >= 0) trip.emplace_back(r, c, it.value());
        }
    Eigen::VectorXd Mf(nf);
    for (int r = 0; r < nf; ++r) {
        int i = free[r];
        Mf[r] = op.M[i];
        trip.emplace_back(r, r, (0.5 - A2[i]) * op.M[i]);
    }
    SpMat Af(nf, nf);
    Af.setFromTriplets(trip.begin(), trip.end());
    const SpMat& B = js.basis.B;
    SpMat Bt = B.transpose();
    js.A = Bt * Af * B;
    js.A = 0.5 * (SpMat(js.A.transpose()) + js.A);
    // columns of B have disjoint supports, so B^T M B is diagonal
    js.Mr = (SpMat(Bt.cwiseAbs()) * Mf).eval();
    return js;
}

namespace {

// number of eigenvalues of (A, M) below sigma, or -1 if the factorization failed
int count_below(const SpMat& A, const Eigen::VectorXd& M, double sigma) {
    SpMat S = A;
    for (int i = 0; i < S.rows(); ++i) S.coeffRef(i, i) -= sigma * M[i];
    Eigen::SimplicialLDLT<SpMat> ldlt(S);
    if (ldlt.info() != Eigen::Success) return -1;
    const auto& D = ldlt.vectorD();
    int c = 0;
    for (int i = 0; i < D.size(); ++i) {
        if (!std::isfinite(D[i]) || D[i] == 0.0) return -1;
        if (D[i] < 0) ++c;
    }
    return c;
}

}  // namespace

StabilityResult smallest_generalized_eigenvalue(const SpMat& A, const Eigen::VectorXd& M, double tol) {
    StabilityResult out;
    const int n = static_cast<int>(A.rows());
    out.dimension = n;
    if (n == 0) throw Error(ErrorKind::NumericalError, "empty eigenproblem");
    // Gershgorin bound on M^{-1/2} A M^{-1/2}
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n), off = Eigen::VectorXd::Zero(n);
    for (int k = 0; k < A.outerSize(); ++k)
        for (SpMat::InnerIterator it(A, k); it; ++it) {
            double v = it.value() / std::sqrt(M[it.row()] * M[it.col()]);
            if (it.row() == it.col())
                diag[it.row()] += v;
            else
                off[it.row()] += std::abs(v);
        }
    double lo = (diag - off).minCoeff();
    Eigen::VectorXd one = Eigen::VectorXd::Ones(n);
    double hi = one.dot(A * one) / one.dot(M.cwiseProduct(one));
    hi += 1e-12 * std::max(1.0, std::abs(hi));
    lo -= 1e-12 * std::max(1.0, std::abs(lo));
    // bisection on the inertia until the bracket is narrow
    int it = 0;
    while (hi - lo > 1e-3 * std::max(1.0, std::abs(hi)) && it < 200) {
        double mid = 0.5 * (lo + hi);
        int c = count_below(A, M, mid);
        if (c < 0) mid += 1e-9 * std::max(1.0, std::abs(mid)), c = count_below(A, M, mid);
        if (c < 0) throw Error(ErrorKind::NumericalError, "inertia count failed");
        if (c >= 1)
            hi = mid;
        else
            lo = mid;
        ++it;
    }
    // inverse iteration with a shift just below the eigenvalue
    double sigma = lo - 1e-6 * std::max(1.0, std::abs(lo));
    SpMat S = A;
    for (int i = 0; i < n; ++i) S.coeffRef(i, i) -= sigma * M[i];
    Eigen::SimplicialLDLT<SpMat> ldlt(S);
    if (ldlt.info() != Eigen::Success) throw Error(ErrorKind::NumericalError, "shifted factorization failed");
    Eigen::VectorXd x = M.cwiseSqrt();
    x /= std::sqrt(x.dot(M.cwiseProduct(x)));
    double lambda = hi, prev = lambda;
    for (int k = 0; k < 500; ++k) {
        Eigen::VectorXd y = ldlt.solve(M.cwiseProduct(x));
        if (!y.allFinite()) throw Error(ErrorKind::NumericalError, "inverse iteration diverged");
        x = y / std::sqrt(y.dot(M.cwiseProduct(y)));
        lambda = x.dot(A * x);
        ++it;
        Eigen::VectorXd res = A * x - lambda * M.cwiseProduct(x);
        double rn = std::sqrt(res.dot(M.cwiseInverse().cwiseProduct(res)));
        if (rn < tol * std::max(1.0, std::abs(lambda)) || (k > 5 && std::abs(lambda - prev) < 1e-14 * std::max(1.0, std::abs(lambda)))) {
            out.converged = true;
            break;
        }
        prev = lambda;
    }
    out.lambda_min = lambda;
    out.iterations = it;
    out.eigenvector.assign(x.data(), x.data() + n);
    return out;
}

StabilityResult jacobi_min_eigenvalue(const TriMesh& mesh, const SymmetryGroup* group) {
    JacobiSystem js = jacobi_system(mesh, group);
    StabilityResult r = smallest_generalized_eigenvalue(js.A, js.Mr);
    Eigen::Map<Eigen::VectorXd> xr(r.eigenvector.data(), static_cast<long>(r.eigenvector.size()));
    Eigen::VectorXd u = js.basis.B * xr;
    std::vector<double> full(mesh.nv(), 0.0);
    for (size_t s = 0; s < js.basis.free.size(); ++s) full[js.basis.free[s]] = u[static_cast<long>(s)];
    r.eigenvector = std::move(full);
    r.subspace = group ? "invariant" : "full";
    if (!r.converged) throw Error(ErrorKind::NumericalError, "inverse iteration did not converge");
    return r;
}

}  // namespace expander
