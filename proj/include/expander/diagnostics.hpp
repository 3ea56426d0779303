#pragma once

#include "expander/mesh.hpp"

#include <string>
#include <vector>

namespace expander {

enum class SurfaceType { Type1, Type2, Other };
std::string to_string(SurfaceType t);

// Needs three boundary loops winding once around Z and invariance under
// y -> -y; throws ClassificationUnavailable otherwise.
SurfaceType classify_type(const TriMesh& mesh);

// phi(p) = c exp(-1/(1 - 4|p|^2)) on |p| < 1/2; c from tools/phi_constant.py.
constexpr double kPhiNormalization = 8.57426310317;
double phi_bump(const Vec3& p);

struct SizeResult {
    double phi_integral = 0.0;
    bool big = false;
    bool dichotomy_ok = true;  // phi_integral outside [4/3, 5/3]
};
SizeResult size_class(const TriMesh& mesh);

// Area of the flat triangle abc inside the ball of radius r about the origin.
double triangle_ball_area(const Vec3& a, const Vec3& b, const Vec3& c, double r);

struct MonotonicityEntry {
    double r = 0.0;
    double ratio = 0.0;
    bool excluded = false;  // ball reaches the boundary
};
struct MonotonicityResult {
    std::vector<MonotonicityEntry> series;
    bool monotone_ok = true;
    double area = 0.0;
    double boundary_integral = 0.0;  // (1/2) int over the boundary of |p|
    double cone_violation = 0.0;     // max(0, area / bound - 1)
    bool cone_bound_ok = true;
};
MonotonicityResult monotonicity_series(const TriMesh& mesh, const std::vector<double>& radii, double slack = 1e-3,
                                       double cone_slack = 1e-2);

// 1/2 int |A|^2 = 1/8 int (p.nu)^2 + int_{dM} k.n - 2 pi chi. |A|^2 comes from
// two-ring quadratic fits; the boundary term is the geodesic turning of the
// boundary polygons in the tangent planes, positive toward the surface.
struct GaussBonnetResult {
    double total_curvature = 0.0;  // 1/2 int |A|^2
    double support_term = 0.0;     // 1/8 int (p.nu)^2
    double boundary_term = 0.0;
    double euler_term = 0.0;       // 2 pi chi
    int chi = 0;
    double residual = 0.0;
    double relative = 0.0;         // |residual| / max(total_curvature, 1e-300)
};
GaussBonnetResult gauss_bonnet_residual(const TriMesh& mesh);

// Integral of |A|^2 / 2 from per-vertex quadratic fits.
double total_curvature(const TriMesh& mesh);

}  // namespace expander
