#pragma once

#include "expander/solver.hpp"

#include <Eigen/Sparse>

#include <string>
#include <vector>

namespace expander {

// Quadratic form of -L in the weighted inner product, restricted to the
// invariant normal variations with Dirichlet data:
//   A = B^T (K_w + M_w/2 - |A|^2 M_w) B,  Mr = B^T M_w B (diagonal).
struct JacobiSystem {
    SpMat A;
    Eigen::VectorXd Mr;
    InvariantBasis basis;
};
// group == nullptr uses the full space of free vertices.
JacobiSystem jacobi_system(const TriMesh& mesh, const SymmetryGroup* group);

struct StabilityResult {
    double lambda_min = 0.0;
    std::vector<double> eigenvector;  // per vertex, weighted-L2 normalized
    int dimension = 0;
    int iterations = 0;
    std::string subspace;
    bool converged = false;
};

// Smallest eigenvalue of A v = lambda Mr v by inertia bisection followed by
// shifted inverse iteration.
StabilityResult smallest_generalized_eigenvalue(const SpMat& A, const Eigen::VectorXd& Mr, double tol = 1e-10);

StabilityResult jacobi_min_eigenvalue(const TriMesh& mesh, const SymmetryGroup* group);

}  // namespace expander
