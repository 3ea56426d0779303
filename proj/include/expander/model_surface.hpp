#pragma once

#include "expander/mesh.hpp"

#include <complex>
#include <string>
#include <vector>

namespace expander {

using Complex = std::complex<double>;

// Chart of the hemisphere {y < 0}: stereographic projection from e2 onto the
// unit disk, w = (nu_z + i nu_x) / (1 - nu_y).
Complex chart_of_normal(const Vec3& nu);
Vec3 normal_of_chart(Complex w);

// Bounded harmonic function with boundary values 1 on J1 = {x<0, z>0},
// 0 on J0 = {z<0}, -1 on J_{-1} = {x>0, z>0}, in closed form, its conjugate
// (zero at w = 0) and the derivative of u + i u*.
double model_u(Complex w);
double model_ustar(Complex w);
Complex model_dF(Complex w);
// The same u by midpoint quadrature of the Poisson integral.
double poisson_u(Complex w, int nquad);

struct ModelChart {
    int n = 0;        // grid points per side on [-1,1]^2
    double h = 0.0;
    std::vector<double> u, ustar;  // NaN outside the open disk
    double min_u = 0.0, max_u = 0.0;
    // max |five point Laplacian| / h^2 over nodes with |w| <= 1/2
    double laplacian_residual = 0.0;

    Complex w_at(int i, int j) const { return {-1.0 + i * h, -1.0 + j * h}; }
    double u_at(int i, int j) const { return u[static_cast<size_t>(j) * n + i]; }
};

ModelChart harmonic_field(int resolution);

struct ModelOptions {
    int resolution = 256;   // lattice cells across the strip
    double T = 4.0;         // |Re zeta| <= T
    double cut = 0.25;      // radius of the half disk removed around zeta = -i pi/2
    double period_tol = 1e-6;
};

// Lattice in zeta = log((1 + v) / (1 - v)), v = -i w, a strip |Im zeta| <= pi/2.
// Re zeta -> +-infinity are the ends of the boundary lines, the edge
// Im zeta = pi/2 is J0 with the origin at zeta = i pi/2, the edge
// Im zeta = -pi/2 is J1 and J_{-1}, which meet at w = 1 (zeta = -i pi/2, the far
// end of X-), and the axis Re zeta = 0 is the ray X-.
struct ModelSurface {
    TriMesh mesh;
    int nx = 0, ny = 0;              // vertices per row / column
    std::vector<Complex> zeta;       // per vertex
    std::vector<Vec3> chart_normal;  // nu(w) per vertex
    double period_mismatch = 0.0;    // max over checked vertices of two integration paths
    double height_mismatch = 0.0;    // max |z - u(w)|
    std::vector<int> axis;           // vertices with Re zeta = 0, top to bottom
    std::vector<char> on_lines;      // vertex lies on the chart circle (a boundary line)
};

// Weierstrass data with the Gauss map as coordinate and z = Re(u + i u*),
// integrated by Gauss-Legendre along lattice paths from the origin. Throws ReconstructionError
// if two paths disagree by more than period_tol.
ModelSurface weierstrass_reconstruct(const ModelChart& chart, const ModelOptions& opt = {});

struct GaussDegrees {
    int d_plus = 0, d_minus = 0;
    double raw_plus = 0.0, raw_minus = 0.0;  // signed Gauss image area / 2 pi
    double distance = 0.0;                   // max distance to the nearest integer
    double abs_curvature = 0.0;              // Gauss image area, int |K|
};
// Spherical triangles of the vertex normals (Van Oosterom and Strackee),
// split by the sign of the face normal's y. Minimal surfaces have orientation
// reversing Gauss maps, so the area is counted with the sign that makes
// those positive. Throws DegreeUnresolved if a raw value is more than 0.2
// from an integer.
GaussDegrees gauss_degrees(const TriMesh& mesh);

struct ModelChecks {
    double u_min = 0.0, u_max = 0.0, u_center = 0.0;
    double minimality_residual = 0.0;  // max |Delta x| over interior vertices
    double axis_deviation = 0.0;       // max distance of the axis row from the ray X-
    double line_deviation = 0.0;       // boundary points away from the line ends
    double slab_violation = 0.0;       // max(x, |z| - 1, 0)
    GaussDegrees degrees;
    double half_curvature_max = 0.0;   // int |K| over the larger of the two halves Re zeta > 0, < 0
};
ModelChecks model_checks(const ModelChart& chart, const ModelSurface& s);

void write_chart_csv(const ModelChart& c, const std::string& path);

}  // namespace expander
