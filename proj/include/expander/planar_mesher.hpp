#pragma once

#include "expander/common.hpp"

#include <array>
#include <functional>
#include <vector>

namespace expander {

using Vec2 = Eigen::Vector2d;

struct PlanarMesh {
    std::vector<Vec2> P;                 // boundary nodes first, in loop order
    std::vector<std::array<int, 3>> T;   // counter-clockwise
    int num_boundary = 0;
};

// Delaunay triangulation of an arbitrary point set (counter-clockwise triangles
// of the convex hull).
std::vector<std::array<int, 3>> delaunay(const std::vector<Vec2>& pts);

// Meshes the region bounded by closed polygons (outer counter-clockwise, holes
// clockwise). Polygon nodes are kept verbatim and every polygon segment is an
// edge of the result. size(p) is the target edge length.
PlanarMesh mesh_polygon_domain(const std::vector<std::vector<Vec2>>& loops, const std::function<double(const Vec2&)>& size,
                               int smoothing_iterations = 6);

// Nodes along a curve c(t), t in [0,1], spaced by the sizing function; both
// endpoints included.
std::vector<double> graded_parameters(const std::function<Vec2(double)>& c, const std::function<double(const Vec2&)>& size,
                                      int min_segments = 1);

}  // namespace expander
