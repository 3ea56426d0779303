#include "expander/foliation.hpp"

#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace expander {

namespace odeint = boost::numeric::odeint;

double radial_fpp(double r, double f, double fp) { return (1.0 + fp * fp) * (0.5 * (f - r * fp) - fp / r); }

namespace {

using State = std::array<double, 2>;

struct Rhs {
    void operator()(const State& x, State& dx, double r) const {
        dx[0] = x[1];
        dx[1] = radial_fpp(r, x[0], x[1]);
    }
};

// f = s + a r^2 + b r^4 near the axis
void series(double s, double r, double& f, double& fp, double& fpp) {
    double a = s / 8.0;
    double b = a * a * a / 2.0 - a / 32.0;
    f = s + a * r * r + b * r * r * r * r;
    fp = 2 * a * r + 4 * b * r * r * r;
    fpp = 2 * a + 12 * b * r * r;
}

double hermite5(double h, double t, double f0, double d0, double s0, double f1, double d1, double s1) {
    // quintic Hermite on [0,1] with derivatives scaled by h
    double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    double h00 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
    double h10 = t - 6 * t3 + 8 * t4 - 3 * t5;
    double h20 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
    double h01 = 10 * t3 - 15 * t4 + 6 * t5;
    double h11 = -4 * t3 + 7 * t4 - 3 * t5;
    double h21 = 0.5 * t3 - t4 + 0.5 * t5;
    return h00 * f0 + h10 * h * d0 + h20 * h * h * s0 + h01 * f1 + h11 * h * d1 + h21 * h * h * s1;
}

}  // namespace

double ProfileCurve::eval(double r) const {
    if (r <= 0) return f.front();
    double x = r / dr;
    size_t i = std::min(static_cast<size_t>(x), f.size() - 2);
    double t = x - static_cast<double>(i);
    return hermite5(dr, t, f[i], fp[i], fpp[i], f[i + 1], fp[i + 1], fpp[i + 1]);
}

double ProfileCurve::deriv(double r) const {
    if (r <= 0) return 0.0;
    double x = r / dr;
    size_t i = std::min(static_cast<size_t>(x), f.size() - 2);
    double t = x - static_cast<double>(i);
    // cubic Hermite of f' using f''
    double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * fp[i] + (t3 - 2 * t2 + t) * dr * fpp[i] + (-2 * t3 + 3 * t2) * fp[i + 1] +
           (t3 - t2) * dr * fpp[i + 1];
}

ProfileCurve integrate_profile(double s, double r_max, const ProfileOptions& opt) {
    if (!(r_max > 0)) throw Error(ErrorKind::InvalidParameter, "r_max must be positive");
    if (s < 0) {
        ProfileCurve c = integrate_profile(-s, r_max, opt);
        c.s = s;
        for (auto& v : c.f) v = -v;
        for (auto& v : c.fp) v = -v;
        for (auto& v : c.fpp) v = -v;
        c.epsilon = -c.epsilon;
        return c;
    }
    ProfileCurve c;
    c.s = s;
    c.dr = opt.dr;
    const size_t n = static_cast<size_t>(std::ceil(r_max / opt.dr - 1e-9)) + 1;
    c.r_max = opt.dr * static_cast<double>(n - 1);
    c.f.assign(n, 0.0);
    c.fp.assign(n, 0.0);
    c.fpp.assign(n, 0.0);
    if (s == 0.0) return c;

    const double r0 = std::min(opt.series_radius, 0.5 * opt.dr);
    series(s, 0.0, c.f[0], c.fp[0], c.fpp[0]);
    State x;
    double fpp0;
    series(s, r0, x[0], x[1], fpp0);
    auto stepper = odeint::make_dense_output(opt.tol, opt.tol, odeint::runge_kutta_dopri5<State>());
    stepper.initialize(x, r0, std::min(1e-4, opt.dr));
    size_t i = 1;
    size_t guard = 0;
    while (i < n) {
        double target = c.r_at(i);
        while (stepper.current_time() < target) {
            stepper.do_step(Rhs());
            if (++guard > 50000000) throw Error(ErrorKind::IntegrationFailure, "too many steps");
            if (stepper.current_time_step() < 1e-14)
                throw Error(ErrorKind::IntegrationFailure, "step size underflow at r=" + std::to_string(stepper.current_time()));
        }
        while (i < n && c.r_at(i) <= stepper.current_time()) {
            State y;
            stepper.calc_state(c.r_at(i), y);
            c.f[i] = y[0];
            c.fp[i] = y[1];
            c.fpp[i] = radial_fpp(c.r_at(i), y[0], y[1]);
            ++i;
        }
    }
    c.epsilon = c.fp.back();
    size_t j = static_cast<size_t>(0.9 * static_cast<double>(n - 1));
    c.epsilon_converged = std::abs(c.fp.back() - c.fp[j]) <= 1e-2 * std::max(std::abs(c.epsilon), 1e-300);
    return c;
}

double profile_ode_residual(const ProfileCurve& c) {
    double m = 0.0;
    const double h = c.dr;
    for (size_t i = 3; i + 3 < c.size(); ++i) {
        double r = c.r_at(i);
        double fpp = (-c.fp[i - 3] + 9 * c.fp[i - 2] - 45 * c.fp[i - 1] + 45 * c.fp[i + 1] - 9 * c.fp[i + 2] + c.fp[i + 3]) /
                     (60.0 * h);
        double res = fpp / (1 + c.fp[i] * c.fp[i]) + c.fp[i] / r - 0.5 * (c.f[i] - r * c.fp[i]);
        m = std::max(m, std::abs(res));
    }
    return m;
}

FoliationTable build_table(double s_min, double s_max, double ds, double r_max, const ProfileOptions& opt) {
    if (!(s_max > s_min) || !(ds > 0)) throw Error(ErrorKind::InvalidParameter, "bad s grid");
    FoliationTable t;
    const int n = static_cast<int>(std::llround((s_max - s_min) / ds)) + 1;
    t.s.resize(n);
    for (int i = 0; i < n; ++i) {
        double v = s_min + ds * i;
        if (std::abs(v) < 1e-12 * ds) v = 0.0;
        t.s[i] = v;
    }
    t.leaves.resize(n);
    // positive leaves integrated once; negatives by oddness
    std::vector<ProfileCurve> leaves(n);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) leaves[i] = integrate_profile(t.s[i], r_max, opt);
    t.leaves = std::move(leaves);
    t.r_max = t.leaves.front().r_max;
    return t;
}

namespace {

// Fritsch-Carlson monotone cubic through (x_i, y_i), evaluated at xq in [x1, x2]
double pchip4(const double* x, const double* y, int n, int k, double xq) {
    auto slope = [&](int i) { return (y[i + 1] - y[i]) / (x[i + 1] - x[i]); };
    auto dnode = [&](int i) {
        if (i == 0) return slope(0);
        if (i == n - 1) return slope(n - 2);
        double a = slope(i - 1), b = slope(i);
        if (a * b <= 0) return 0.0;
        double h0 = x[i] - x[i - 1], h1 = x[i + 1] - x[i];
        double w1 = 2 * h1 + h0, w2 = h1 + 2 * h0;
        return (w1 + w2) / (w1 / a + w2 / b);
    };
    double h = x[k + 1] - x[k];
    double t = (xq - x[k]) / h;
    double d0 = dnode(k), d1 = dnode(k + 1);
    double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y[k] + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * y[k + 1] + (t3 - t2) * h * d1;
}

}  // namespace

double FoliationTable::interp(double sq, double r) const {
    if (sq < s.front() || sq > s.back()) throw Error(ErrorKind::OutOfRange, "s outside table");
    if (r > r_max) throw Error(ErrorKind::OutOfRange, "radius outside table");
    size_t k = std::upper_bound(s.begin(), s.end(), sq) - s.begin();
    k = std::clamp<size_t>(k, 1, s.size() - 1) - 1;
    // local window of up to 4 leaves
    int lo = std::max<int>(0, static_cast<int>(k) - 1);
    int hi = std::min<int>(static_cast<int>(s.size()) - 1, static_cast<int>(k) + 2);
    double xs[4], ys[4];
    int m = 0;
    for (int i = lo; i <= hi; ++i) {
        xs[m] = s[i];
        ys[m] = leaves[i].eval(r);
        ++m;
    }
    return pchip4(xs, ys, m, static_cast<int>(k) - lo, sq);
}

double zeta(const Vec3& p, const FoliationTable& t) {
    double r = std::hypot(p.x(), p.y());
    double z = p.z();
    if (r > t.r_max) throw Error(ErrorKind::OutOfRange, "point outside tabulated radius");
    double flo = t.leaves.front().eval(r), fhi = t.leaves.back().eval(r);
    if (z < flo || z > fhi) throw Error(ErrorKind::OutOfRange, "point outside tabulated leaves");
    // leaf bracket
    size_t lo = 0, hi = t.s.size() - 1;
    while (hi - lo > 1) {
        size_t mid = (lo + hi) / 2;
        if (t.leaves[mid].eval(r) <= z)
            lo = mid;
        else
            hi = mid;
    }
    double a = t.s[lo], b = t.s[hi];
    if (t.leaves[lo].eval(r) == z) return a;
    boost::uintmax_t iters = 100;
    auto tol = boost::math::tools::eps_tolerance<double>(50);
    auto g = [&](double sq) { return t.interp(sq, r) - z; };
    auto br = boost::math::tools::toms748_solve(g, a, b, g(a), g(b), tol, iters);
    double sq = 0.5 * (br.first + br.second);
    // polish against direct integration of the leaf through the estimate
    const double rr = std::max(r, 1e-6);
    ProfileOptions opt;
    opt.dr = std::min(0.01, rr);
    for (int it = 0; it < 3; ++it) {
        double h = 1e-6;
        double f0 = integrate_profile(sq, rr + opt.dr, opt).eval(r) - z;
        if (std::abs(f0) < 1e-14) break;
        double f1 = integrate_profile(sq + h, rr + opt.dr, opt).eval(r) - z;
        double d = (f1 - f0) / h;
        if (!(std::abs(d) > 0)) break;
        sq -= f0 / d;
    }
    return sq;
}

LeafCircle circle_of_leaf(double s, double R) {
    if (!(R > std::abs(s))) throw Error(ErrorKind::GeometryError, "leaf does not meet the sphere (need R > |s|)");
    if (s == 0.0) return {R, 0.0};
    if (s < 0) {
        LeafCircle c = circle_of_leaf(-s, R);
        return {c.rho, -c.z};
    }
    ProfileOptions opt;
    opt.dr = std::min(0.01, R / 100.0);
    ProfileCurve c = integrate_profile(s, R, opt);
    auto g = [&](double rho) {
        double f = c.eval(rho);
        return rho * rho + f * f - R * R;
    };
    double a = 0.0, b = R;
    if (!(g(a) < 0 && g(b) > 0)) throw Error(ErrorKind::GeometryError, "leaf/sphere intersection not bracketed");
    // plain bisection to 1e-10
    while (b - a > 1e-12) {
        double m = 0.5 * (a + b);
        (g(m) < 0 ? a : b) = m;
    }
    double rho = 0.5 * (a + b);
    return {rho, c.eval(rho)};
}

void write_profile_csv(const ProfileCurve& c, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::InvalidParameter, "cannot write " + path);
    out << "r,f,fp\n";
    char buf[128];
    for (size_t i = 0; i < c.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.10g,%.17g,%.17g\n", c.r_at(i), c.f[i], c.fp[i]);
        out << buf;
    }
}

void write_table_csv(const FoliationTable& t, const std::string& path, double R) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::InvalidParameter, "cannot write " + path);
    out << "s,epsilon,epsilon_converged,rho,z_s\n";
    char buf[160];
    for (size_t i = 0; i < t.s.size(); ++i) {
        double rho = std::nan(""), z = std::nan("");
        if (R > std::abs(t.s[i])) {
            LeafCircle c = circle_of_leaf(t.s[i], R);
            rho = c.rho;
            z = c.z;
        }
        std::snprintf(buf, sizeof buf, "%.10g,%.17g,%d,%.17g,%.17g\n", t.s[i], t.leaves[i].epsilon,
                      t.leaves[i].epsilon_converged ? 1 : 0, rho, z);
        out << buf;
    }
}

}  // namespace expander
