#pragma once

#include "expander/boundary.hpp"
#include "expander/symmetry.hpp"

#include <string>
#include <vector>

namespace expander {

// Closed curve on the flat unit cylinder in the universal cover: the point
// after the last one is (theta[0] + 2 pi, z[0]).
struct CylinderCurve {
    std::vector<double> theta, z;
    size_t size() const { return theta.size(); }
};

// Radial projection of a polyline winding once around Z. flipped is set when
// the curve winds negatively; theta is then negated so it always increases by 2 pi.
CylinderCurve to_cylinder(const std::vector<Vec3>& pts, bool* flipped = nullptr);
std::vector<Vec3> from_cylinder(const CylinderCurve& c, double R, bool flipped = false);

double curve_length(const CylinderCurve& c);
double max_abs_z(const CylinderCurve& c);
// Brute force crossing test between non-adjacent segments, including the
// copies shifted by +-2 pi.
bool is_embedded(const CylinderCurve& c);
// 0 if the curves cross (in the universal cover), else min vertex distance
double curve_separation(const CylinderCurve& a, const CylinderCurve& b);

struct CsfOptions {
    double dt = 0.0;         // 0: use the bound 0.25 h_min^2
    double T = 1.0;
    int samples = 10;        // stored curves besides the initial one
    bool redistribute = true;
};

struct CsfTrajectory {
    std::vector<double> sample_times;
    std::vector<CylinderCurve> samples;
    std::vector<double> step_max_z;   // per step, including the initial curve
    std::vector<double> step_length;
    int steps = 0;
    double dt = 0.0;
    int winding = 1;
};

// Semi-implicit parametric flow X_t = X_ss with uniform arclength
// redistribution after each step. Throws InvalidParameter if dt exceeds the
// bound and FlowError if a sampled curve self-intersects.
CsfTrajectory csf_run(const CylinderCurve& curve, const CsfOptions& opt);

struct HomotopyResult {
    std::vector<BoundarySpec> path;  // steps + 1 triples, first is the input
    std::vector<double> times;
    double max_invariance_residual = 0.0;
    bool max_z_monotone = true;      // per curve, every flow step
    bool winding_preserved = true;
    bool lengths_monotone = true;
    double final_circle_deviation = 0.0;  // max distance to the horizontal circle at the mean height
};

// Flows the three curves of spec (radially projected to the cylinder) and
// samples the path; every sampled triple must pass validate_boundary, else
// HomotopyError. group may be null.
HomotopyResult homotopy_to_circles(const BoundarySpec& spec, int steps, const SymmetryGroup* group, double T = 10.0,
                                   double dt = 0.0, double eps_star = 0.05);

void write_curve_csv(const CylinderCurve& c, const std::string& path);

}  // namespace expander
