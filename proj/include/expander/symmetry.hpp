#pragma once

#include "expander/common.hpp"

#include <vector>

namespace expander {

struct TriMesh;

// The group G_k of 4k isometries fixing the origin.
struct SymmetryGroup {
    int k = 1;
    std::vector<Mat3> elements;
    std::vector<Vec3> q_lines;        // directions at odd multiples of pi/(2k)
    std::vector<Vec3> mirror_normals; // normals of P_theta, theta multiple of pi/k

    size_t order() const { return elements.size(); }
    // index of the element matching m within tol, or -1
    int find(const Mat3& m, double tol = 1e-12) const;
};

SymmetryGroup build_group(int k);
// Trivial group {identity}, used when no symmetry is imposed.
SymmetryGroup identity_group();
// Subgroup of G_k fixing the upper half annulus: rotations about Z and vertical reflections.
SymmetryGroup annulus_stabilizer(int k);

bool is_subgroup(int k, int n);

Mat3 rotation_z(double angle);
Mat3 reflection_vertical_plane(double theta);  // reflection in P_theta
Mat3 rotation_pi_about_horizontal(double theta);
Mat3 reflection_z();

struct QPoints {
    std::vector<Vec3> points;            // Q_k cap circle of radius r, z=0
    std::vector<Vec3> even_midpoints;    // theta even multiple of pi/k
    std::vector<Vec3> odd_midpoints;     // theta odd multiple of pi/k
};
QPoints q_points(int k, double r);

// Vertex permutation induced by each group element: perm[g][i] = index of the
// vertex at elements[g]*V[i].
struct VertexAction {
    std::vector<std::vector<int>> perm;
    std::vector<int> orbit_of;       // orbit id per vertex
    int num_orbits = 0;
};

// Discovers the action by nearest-image matching (tolerance tol). Boundary
// (fixed) vertices only match fixed vertices and free only free, which keeps
// coincident but distinct seed vertices apart. Throws SymmetryMismatch.
VertexAction discover_action(const TriMesh& mesh, const SymmetryGroup& group, double tol = 1e-9);

// Replaces every vertex by the orbit average. The returned mesh is an exact
// fixed point up to rounding.
TriMesh symmetrize_mesh(const TriMesh& mesh, const SymmetryGroup& group);
void symmetrize_positions(std::vector<Vec3>& V, const SymmetryGroup& group, const VertexAction& act);

// max over elements and vertices of |g V[i] - V[perm[g][i]]|
double symmetry_defect(const std::vector<Vec3>& V, const SymmetryGroup& group, const VertexAction& act);

}  // namespace expander
