#pragma once

#include "expander/common.hpp"
#include "expander/symmetry.hpp"

#include <string>
#include <vector>

namespace expander {

struct BoundaryCurve {
    std::vector<Vec3> pts;  // closed polyline, last point != first
    int curve_id = -1;
    int winding = 0;
};

struct ValidationReport {
    bool on_sphere = true;
    bool off_axis = true;
    bool embedded = true;
    bool disjoint = true;
    bool winding_ok = true;
    bool region_ok = true;
    bool invariant = true;
    bool admissible = true;
    double eps_max = 0.0;
    double invariance_residual = 0.0;
    double invariance_tol = 0.0;
    std::string message;
};

struct BoundarySpec {
    double R = 1.0;
    std::vector<BoundaryCurve> curves;
    double eps_max = 0.0;
    ValidationReport report;
};

// Sum of wrapped angle increments about Z over 2 pi.
int winding_number(const std::vector<Vec3>& pts);
double polyline_eps_max(const std::vector<Vec3>& pts);
// max distance from g*p to the union of polylines, over p and g
double set_invariance_residual(const std::vector<BoundaryCurve>& curves, const SymmetryGroup& group);

// Fills spec.report and spec.eps_max. group may be null. Class S requires three
// curves of winding one, eps_max <= eps_star and invariance.
ValidationReport validate_boundary(BoundarySpec& spec, const SymmetryGroup* group, double eps_star = 0.05);

BoundarySpec make_circles_boundary(double s, double R, int n_seg = 64);
// Horizontal circles through given circle data, ordered upper, middle, lower.
BoundarySpec circles_from_heights(double R, const std::vector<double>& heights, int n_seg);

// Scales a link on the unit sphere by R and validates it. Throws
// RejectedBoundary on winding, region, axis or disjointness failures.
BoundarySpec make_cone_boundary(const std::vector<std::vector<Vec3>>& link, double R, int k, double eps_star = 0.05);

// Test fixture: G_3-symmetric wiggled triple on the unit sphere with
// theta = t + a sin 6t (not monotone for a > 1/6) and z = c h + b cos 3t.
std::vector<std::vector<Vec3>> wiggled_link(int n = 288, double a = 0.25, double h = 0.03, double b = 0.01);

enum class GammaPiece { OuterArc, InnerArc, Ray };

struct GammaCurve {
    std::vector<Vec3> pts;  // closed, counter-clockwise, in {z=0}
    std::vector<GammaPiece> piece;  // piece starting at each point
};

GammaCurve make_gamma(int k, double R, double eps, int nodes_per_arc = 16, int nodes_per_ray = 16);
double polygon_area_xy(const std::vector<Vec3>& pts);
double total_turning_xy(const std::vector<Vec3>& pts);
// brute force segment intersection test for a closed planar polyline
bool polyline_is_simple_xy(const std::vector<Vec3>& pts);

void write_boundary_csv(const BoundarySpec& spec, const std::string& prefix);

}  // namespace expander
