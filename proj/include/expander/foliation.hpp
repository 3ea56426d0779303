#pragma once

#include "expander/common.hpp"

#include <string>
#include <vector>

namespace expander {

// Radial profile z = f_s(r) of a rotationally symmetric expander leaf.
struct ProfileCurve {
    double s = 0.0;
    double r_max = 0.0;
    double dr = 0.0;
    std::vector<double> f, fp, fpp;  // samples at r_i = i*dr
    double epsilon = 0.0;            // asymptotic slope estimate f'(r_max)
    bool epsilon_converged = false;

    double eval(double r) const;
    double deriv(double r) const;
    size_t size() const { return f.size(); }
    double r_at(size_t i) const { return dr * static_cast<double>(i); }
};

struct ProfileOptions {
    double dr = 0.01;
    double tol = 1e-13;
    double series_radius = 1e-3;
};

// Right-hand side f'' of the radial expander equation.
double radial_fpp(double r, double f, double fp);

ProfileCurve integrate_profile(double s, double r_max, const ProfileOptions& opt = {});

// Pointwise residual f''/(1+f'^2) + f'/r - (f - r f')/2 with f'' from sixth
// order differences of the stored f' samples; max over interior samples.
double profile_ode_residual(const ProfileCurve& c);

struct FoliationTable {
    std::vector<double> s;
    std::vector<ProfileCurve> leaves;
    double r_max = 0.0;

    // f_s(r) for arbitrary s in range, monotone cubic in s
    double interp(double s, double r) const;
};

// Leaves are independent; built in parallel. Grid s_min:ds:s_max.
FoliationTable build_table(double s_min, double s_max, double ds, double r_max, const ProfileOptions& opt = {});

// Leaf value through p. Throws OutOfRange outside the table.
double zeta(const Vec3& p, const FoliationTable& table);

struct LeafCircle {
    double rho = 0.0;
    double z = 0.0;
};
LeafCircle circle_of_leaf(double s, double R);

void write_profile_csv(const ProfileCurve& c, const std::string& path);
void write_table_csv(const FoliationTable& t, const std::string& path, double R);

}  // namespace expander
