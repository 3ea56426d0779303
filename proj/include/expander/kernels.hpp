#pragma once

#include "expander/mesh.hpp"

#include <vector>

namespace expander {

// Vertex to incident (face, corner) lists in increasing face order.
struct VertexFaces {
    std::vector<int> offset;
    std::vector<int> face;
    std::vector<int> corner;
};
VertexFaces build_vertex_faces(const std::vector<std::array<int, 3>>& F, size_t nv);

// Sum over faces of e^{|centroid|^2/4} * area. The parallel versions give
// bit-identical results: per-face values are summed in face order.
double weighted_area_serial(const std::vector<Vec3>& V, const std::vector<std::array<int, 3>>& F);
double weighted_area_parallel(const std::vector<Vec3>& V, const std::vector<std::array<int, 3>>& F);
inline double weighted_area(const TriMesh& m) { return weighted_area_parallel(m.V, m.F); }

void weighted_area_gradient_serial(const std::vector<Vec3>& V, const std::vector<std::array<int, 3>>& F, std::vector<Vec3>& grad);
void weighted_area_gradient_parallel(const std::vector<Vec3>& V, const std::vector<std::array<int, 3>>& F, const VertexFaces& vf,
                                     std::vector<Vec3>& grad);

// Area weighted unit vertex normals, and barycentric vertex areas.
void vertex_normals_serial(const std::vector<Vec3>& V, const std::vector<std::array<int, 3>>& F, std::vector<Vec3>& N,
                           std::vector<double>& area);
void vertex_normals_parallel(const std::vector<Vec3>& V, const std::vector<std::array<int, 3>>& F, const VertexFaces& vf,
                             std::vector<Vec3>& N, std::vector<double>& area);

// Mixed Voronoi vertex areas (Voronoi cells, obtuse triangles split by halves and quarters).
std::vector<double> mixed_areas(const std::vector<Vec3>& V, const std::vector<std::array<int, 3>>& F);

}  // namespace expander
