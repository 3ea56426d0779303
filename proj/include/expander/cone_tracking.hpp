#pragma once

#include "expander/boundary.hpp"
#include "expander/mesh.hpp"

#include <vector>

namespace expander {

// Cone over closed link polylines on the unit sphere, flat between rays.
struct Cone {
    std::vector<std::vector<Vec3>> links;
};
Cone cone_from_boundary(const BoundarySpec& spec);
double cone_distance(const Cone& cone, const Vec3& x);

struct RollingBall {
    double lambda = 0.0;
    bool conclusive = false;
};
// Largest lambda with B(p + lambda |p| nu, lambda |p|) disjoint from the cone
// (both sides) for sampled smooth points p, by bisection.
RollingBall rolling_ball_lambda(const Cone& cone, int bisections = 60);

inline double eta_bound(double lambda, double m = 2.0) { return 8.0 * m / lambda; }
double radius_rc(double lambda, double m = 2.0);
// Time during which the barrier of the handle estimate stays valid.
inline double barrier_time_bound(double r, double R, double m) { return r * (R - r) / m; }

struct ConeTrackingResult {
    double lambda_hat = 0.0;
    bool conclusive = false;
    double eta = 0.0;
    double r_c = 0.0;
    double max_pdist = 0.0;          // over all vertices
    double max_pdist_outside = 0.0;  // over vertices with |p| > r_c
    int vertices_outside = 0;
    bool eta_ok = false;
    double r_tilde = 0.0;            // radius beyond which the surface is a normal graph over C
    double max_angle = 0.0;          // between normal and the cone normal beyond r_tilde, radians
    bool projection_injective = false;
};
ConeTrackingResult cone_tracking_checks(const TriMesh& mesh, const Cone& cone, double m = 2.0, double max_angle = 0.5);

}  // namespace expander
