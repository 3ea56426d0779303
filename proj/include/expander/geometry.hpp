#pragma once

#include "expander/mesh.hpp"

#include <vector>

namespace expander {

struct GeometryCache {
    std::vector<Vec3> face_normal;
    std::vector<double> face_area;
    std::vector<Vec3> normal;          // area-weighted vertex normals
    std::vector<Vec3> mean_curvature;  // cotangent mean curvature vector (Delta x)
    std::vector<double> area_bary;
    std::vector<double> area_mixed;
    std::vector<double> A2;            // |A|^2 from a one-ring shape operator fit
    std::vector<double> angle_defect;  // 2pi - angle sum (interior), pi - angle sum (boundary)
    std::vector<double> K;             // angle defect / mixed area, interior vertices
    std::vector<double> turning;       // boundary vertices: pi - angle sum
    std::vector<Vec3> conormal;        // boundary vertices: unit inward conormal
    std::vector<char> degenerate;
};

GeometryCache compute_geometry(const TriMesh& mesh, const Topology& topo);

// Per-vertex least squares shape operator fit, returns |A|^2 per vertex.
std::vector<double> shape_operator_norm2(const TriMesh& mesh, const Topology& topo, const std::vector<Vec3>& normals);

double cot_angle(const Vec3& a, const Vec3& b, const Vec3& c);  // cot of angle at a in triangle abc

}  // namespace expander
