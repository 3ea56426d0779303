#pragma once

#include "expander/common.hpp"

#include <array>
#include <string>
#include <vector>

namespace expander {

// Boundary curve ids used by the generated surfaces.
namespace curve {
constexpr int kUpper = 0;    // C_s
constexpr int kMiddle = 1;   // equator
constexpr int kLower = 2;    // C_{-s}
constexpr int kHole = 3;     // boundary of the small disk D_eps
constexpr int kGamma = 4;    // Gamma(eps) before welding
constexpr int kGeneric = 9;  // any other fixed boundary
}  // namespace curve

struct VertexTag {
    int curve = -1;  // -1: free
    double param = 0.0;
    bool fixed() const { return curve >= 0; }
};

struct TriMesh {
    std::vector<Vec3> V;
    std::vector<std::array<int, 3>> F;
    std::vector<VertexTag> tags;

    size_t nv() const { return V.size(); }
    size_t nf() const { return F.size(); }
    void ensure_tags() {
        if (tags.size() != V.size()) tags.resize(V.size());
    }
    int add_vertex(const Vec3& p, VertexTag t = {}) {
        V.push_back(p);
        tags.push_back(t);
        return static_cast<int>(V.size()) - 1;
    }
};

struct Topology {
    int num_vertices = 0;
    std::vector<std::array<int, 2>> edges;          // unique undirected edges (a<b)
    std::vector<std::array<int, 3>> face_edges;     // edge id opposite to each corner
    std::vector<std::array<int, 2>> edge_faces;     // -1 if missing
    std::vector<std::vector<int>> vertex_faces;
    std::vector<std::vector<int>> vertex_neighbors;  // sorted
    std::vector<char> boundary_vertex;
    std::vector<char> used_vertex;
    std::vector<std::vector<int>> boundary_loops;   // vertex cycles oriented along face orientation
    std::vector<int> component;                     // per vertex, -1 if isolated
    int num_components = 0;
    int num_isolated = 0;

    bool is_boundary_edge(int e) const { return edge_faces[e][1] < 0; }
};

// Throws TopologyError on non-manifold edges or inconsistent orientation.
Topology build_topology(const TriMesh& mesh);

struct EulerInfo {
    int chi = 0;
    int b = 0;
    int g = 0;
    int components = 1;
    int isolated = 0;
};

// For a disconnected mesh the totals are returned and a warning logged;
// use component_euler for per-component values.
EulerInfo euler_and_genus(const TriMesh& mesh);
std::vector<EulerInfo> component_euler(const TriMesh& mesh);

struct SliceCurve {
    std::vector<Vec3> pts;
    bool closed = false;
};

struct SliceResult {
    std::vector<SliceCurve> curves;
    int perturbed_vertices = 0;
};

// Intersection with the plane {y=0}. Vertices within 1e-12 of the plane are
// treated as lying on the y>0 side.
SliceResult slice_y0(const TriMesh& mesh);

// OBJ or PLY (ASCII) chosen by extension. Constraint tags go to path + ".json".
TriMesh load_mesh(const std::string& path);
void save_mesh(const TriMesh& mesh, const std::string& path);

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);
// 4 sqrt(3) area / sum of squared edges; 1 for equilateral
double triangle_quality(const Vec3& a, const Vec3& b, const Vec3& c);
double min_triangle_quality(const TriMesh& mesh);
double mean_edge_length(const TriMesh& mesh);
double euclidean_area(const TriMesh& mesh);

// Basic fixtures.
TriMesh make_octahedron();
// Structured polar disk of radius R centred at c in the plane z = c.z,
// boundary tagged with curve id.
TriMesh make_polar_disk(double R, int rings, int sectors0, const Vec3& center = Vec3::Zero(), int boundary_curve = curve::kGeneric);
// Reverse all face orientations.
void flip_orientation(TriMesh& mesh);
// Appends b to a (no welding).
void append_mesh(TriMesh& a, const TriMesh& b);
// Apply a linear map to all vertices, optionally reversing face winding.
TriMesh transform_mesh(const TriMesh& m, const Mat3& A, bool flip_faces = false);

}  // namespace expander
