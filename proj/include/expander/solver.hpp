#pragma once

#include "expander/mesh.hpp"
#include "expander/symmetry.hpp"

#include <Eigen/Sparse>

#include <string>
#include <vector>

namespace expander {

using SpMat = Eigen::SparseMatrix<double>;

struct ResidualResult {
    std::vector<Vec3> r;         // per vertex, zero on the boundary
    std::vector<double> scaled;  // |r| / max(1, |p|)
    double max = 0.0;            // of scaled
    double l2 = 0.0;             // area weighted, of scaled
    int flagged = 0;             // degenerate one-rings skipped
};

// Normal part of the discrete first variation of weighted area divided by
// the weighted vertex area; approximates H - (p.nu) nu / 2.
ResidualResult expander_residual(const TriMesh& mesh);

struct SolveOptions {
    double tol = 1e-3;
    int max_iter = 2000;
    double step = 1.0;  // initial line search step (preconditioned units)
    double armijo = 1e-4;
    double backtrack = 0.5;
    int smooth_every = 50;
    double min_quality = 0.02;
    bool newton = true;
    double vector_until = 0.5;  // full position steps while residual_max is above this
    double flow_time = 0.01;    // implicit time of a full position step
    int vector_iters = 10;      // at most this many full position steps
    bool verbose = false;
};

struct IterationRecord {
    int iter = 0;
    double area = 0.0;
    double residual_max = 0.0;
    double residual_l2 = 0.0;
    double step = 0.0;
    bool newton = false;
};

struct SolveResult {
    TriMesh mesh;
    int iterations = 0;
    double weighted_area = 0.0;
    double residual_max = 0.0;
    double residual_l2 = 0.0;
    bool converged = false;
    std::vector<IterationRecord> history;
    std::string message;
};

// Gradient descent on weighted area with boundary vertices fixed, steps in
// the group invariant normal directions preconditioned by the weighted
// operator, Armijo backtracking and symmetrization after every step.
SolveResult minimize(const TriMesh& seed, const SymmetryGroup& group, const SolveOptions& opt = {});

// Weighted cotangent stiffness (weight at face centroids) and lumped weighted mass.
struct WeightedOperators {
    SpMat K;
    Eigen::VectorXd M;
};
WeightedOperators weighted_operators(const TriMesh& mesh);

// Basis of normal variations u with u(g p) = chi(g) u(p) on the free vertices,
// one column per orbit; orbits fixed by an element with chi = -1 drop out.
struct InvariantBasis {
    SpMat B;                 // rows: free vertex slots, columns: orbits
    std::vector<int> chi;    // per group element
    std::vector<int> free;   // vertex index of each row
    std::vector<int> slot;   // row of each vertex, -1 if fixed
};
InvariantBasis invariant_basis(const TriMesh& mesh, const SymmetryGroup& group, const VertexAction& act,
                               const std::vector<Vec3>& normals);

}  // namespace expander
