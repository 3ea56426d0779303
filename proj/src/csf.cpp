#include "expander/csf.hpp"

#include <Eigen/Sparse>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace expander {

namespace {

constexpr double kTwoPi = 2 * kPi;

double wrap(double a) {
    while (a > kPi) a -= kTwoPi;
    while (a <= -kPi) a += kTwoPi;
    return a;
}

// point j in the universal cover, any integer j
Eigen::Vector2d at(const CylinderCurve& c, long j) {
    long n = static_cast<long>(c.size());
    long q = j >= 0 ? j / n : -((-j + n - 1) / n);
    long r = j - q * n;
    return {c.theta[r] + kTwoPi * q, c.z[r]};
}

bool segments_cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c,
                    const Eigen::Vector2d& d) {
    auto orient = [](const Eigen::Vector2d& p, const Eigen::Vector2d& q, const Eigen::Vector2d& r) {
        return (q.x() - p.x()) * (r.y() - p.y()) - (q.y() - p.y()) * (r.x() - p.x());
    };
    double o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
    return o1 * o2 < 0 && o3 * o4 < 0;
}

void resample_uniform(CylinderCurve& c) {
    const size_t n = c.size();
    std::vector<double> s(n + 1, 0.0);
    for (size_t j = 0; j < n; ++j) s[j + 1] = s[j] + (at(c, j + 1) - at(c, j)).norm();
    const double L = s[n];
    CylinderCurve out;
    out.theta.resize(n);
    out.z.resize(n);
    out.theta[0] = c.theta[0];
    out.z[0] = c.z[0];
    size_t seg = 0;
    for (size_t j = 1; j < n; ++j) {
        double t = L * j / n;
        while (seg + 1 < n && s[seg + 1] < t) ++seg;
        double u = (t - s[seg]) / (s[seg + 1] - s[seg]);
        Eigen::Vector2d p = (1 - u) * at(c, seg) + u * at(c, seg + 1);
        out.theta[j] = p.x();
        out.z[j] = p.y();
    }
    c = std::move(out);
}

}  // namespace

CylinderCurve to_cylinder(const std::vector<Vec3>& pts, bool* flipped) {
    if (pts.size() < 3) throw Error(ErrorKind::InvalidParameter, "curve needs at least 3 points");
    CylinderCurve c;
    double th = std::atan2(pts[0].y(), pts[0].x());
    for (size_t j = 0; j < pts.size(); ++j) {
        const Vec3& p = pts[j];
        double rho = std::hypot(p.x(), p.y());
        if (rho == 0) throw Error(ErrorKind::InvalidParameter, "curve meets the axis");
        if (j > 0) th += wrap(std::atan2(p.y(), p.x()) - std::atan2(pts[j - 1].y(), pts[j - 1].x()));
        c.theta.push_back(th);
        c.z.push_back(p.z() / rho);
    }
    double total = th + wrap(std::atan2(pts[0].y(), pts[0].x()) - std::atan2(pts.back().y(), pts.back().x())) -
                   c.theta[0];
    int w = static_cast<int>(std::lround(total / kTwoPi));
    if (std::abs(w) != 1) throw Error(ErrorKind::InvalidParameter, "curve must wind once around Z");
    if (flipped) *flipped = w < 0;
    if (w < 0)
        for (auto& t : c.theta) t = -t;
    return c;
}

std::vector<Vec3> from_cylinder(const CylinderCurve& c, double R, bool flipped) {
    std::vector<Vec3> out;
    out.reserve(c.size());
    for (size_t j = 0; j < c.size(); ++j) {
        double th = flipped ? -c.theta[j] : c.theta[j];
        out.push_back(R * Vec3(std::cos(th), std::sin(th), c.z[j]) / std::sqrt(1 + c.z[j] * c.z[j]));
    }
    return out;
}

double curve_length(const CylinderCurve& c) {
    double L = 0;
    for (size_t j = 0; j < c.size(); ++j) L += (at(c, j + 1) - at(c, j)).norm();
    return L;
}

double max_abs_z(const CylinderCurve& c) {
    double m = 0;
    for (double z : c.z) m = std::max(m, std::abs(z));
    return m;
}

bool is_embedded(const CylinderCurve& c) {
    const long n = static_cast<long>(c.size());
    for (long i = 0; i < n; ++i)
        for (long j = i - n; j < 2 * n; ++j) {
            long d = std::abs(j - i);
            if (d <= 1) continue;
            if (segments_cross(at(c, i), at(c, i + 1), at(c, j), at(c, j + 1))) return false;
        }
    return true;
}

double curve_separation(const CylinderCurve& a, const CylinderCurve& b) {
    const long n = static_cast<long>(a.size()), m = static_cast<long>(b.size());
    double best = std::numeric_limits<double>::infinity();
    for (long i = 0; i < n; ++i)
        for (long j = -m; j < 2 * m; ++j) {
            if (segments_cross(at(a, i), at(a, i + 1), at(b, j), at(b, j + 1))) return 0.0;
            best = std::min(best, (at(a, i) - at(b, j)).norm());
        }
    return best;
}

CsfTrajectory csf_run(const CylinderCurve& curve, const CsfOptions& opt) {
    const size_t n = curve.size();
    if (n < 3) throw Error(ErrorKind::InvalidParameter, "curve needs at least 3 points");
    if (!(opt.T >= 0)) throw Error(ErrorKind::InvalidParameter, "T must be nonnegative");
    CylinderCurve c = curve;
    double hmin = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < n; ++j) hmin = std::min(hmin, (at(c, j + 1) - at(c, j)).norm());
    const double bound = 0.25 * hmin * hmin;
    double dt = opt.dt > 0 ? opt.dt : bound;
    if (dt > bound * (1 + 1e-12)) throw Error(ErrorKind::InvalidParameter, "dt above 0.25 h_min^2");
    const int steps = static_cast<int>(std::ceil(opt.T / dt - 1e-9));
    if (steps > 0) dt = opt.T / steps;

    CsfTrajectory tr;
    tr.dt = dt;
    tr.steps = steps;
    tr.sample_times.push_back(0.0);
    tr.samples.push_back(c);
    tr.step_max_z.push_back(max_abs_z(c));
    tr.step_length.push_back(curve_length(c));
    const int samples = std::max(1, opt.samples);

    using Triplet = Eigen::Triplet<double>;
    std::vector<Triplet> trip;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    Eigen::VectorXd rt(n), rz(n);
    std::vector<double> l(n);
    int next_sample = 1;
    for (int step = 1; step <= steps; ++step) {
        for (size_t j = 0; j < n; ++j) l[j] = (at(c, j + 1) - at(c, j)).norm();
        // (M - dt K) X = M X_old, K the arclength second difference
        trip.clear();
        for (size_t j = 0; j < n; ++j) {
            size_t jp = (j + 1) % n, jm = (j + n - 1) % n;
            double m = 0.5 * (l[jm] + l[j]);
            trip.emplace_back(j, j, m + dt * (1 / l[jm] + 1 / l[j]));
            trip.emplace_back(j, jp, -dt / l[j]);
            trip.emplace_back(j, jm, -dt / l[jm]);
            rt[j] = m * c.theta[j];
            rz[j] = m * c.z[j];
        }
        // the neighbours across the seam are shifted by 2 pi
        rt[n - 1] += dt / l[n - 1] * kTwoPi;
        rt[0] -= dt / l[n - 1] * kTwoPi;
        Eigen::SparseMatrix<double> A(n, n);
        A.setFromTriplets(trip.begin(), trip.end());
        if (step == 1) ldlt.analyzePattern(A);
        ldlt.factorize(A);
        if (ldlt.info() != Eigen::Success) throw Error(ErrorKind::FlowError, "factorization failed");
        Eigen::VectorXd t = ldlt.solve(rt), z = ldlt.solve(rz);
        for (size_t j = 0; j < n; ++j) c.theta[j] = t[j], c.z[j] = z[j];
        if (opt.redistribute) resample_uniform(c);
        tr.step_max_z.push_back(max_abs_z(c));
        tr.step_length.push_back(curve_length(c));
        if (static_cast<long>(step) * samples >= static_cast<long>(next_sample) * steps) {
            if (!is_embedded(c)) throw Error(ErrorKind::FlowError, "self-intersection at t = " + std::to_string(step * dt));
            tr.sample_times.push_back(step * dt);
            tr.samples.push_back(c);
            ++next_sample;
        }
    }
    double turn = at(c, n).x() - at(c, 0).x();
    tr.winding = static_cast<int>(std::lround(turn / kTwoPi));
    return tr;
}

HomotopyResult homotopy_to_circles(const BoundarySpec& spec, int steps, const SymmetryGroup* group, double T, double dt,
                                   double eps_star) {
    if (steps < 1) throw Error(ErrorKind::InvalidParameter, "steps must be positive");
    if (spec.curves.size() != 3) throw Error(ErrorKind::InvalidParameter, "need three curves");
    const double R = spec.R;
    std::vector<CsfTrajectory> tr(3);
    std::vector<char> flip(3, 0);
    CsfOptions o;
    o.T = T;
    o.samples = steps;
    // common step so that the three samples line up
    double bound = std::numeric_limits<double>::infinity();
    std::vector<CylinderCurve> cyl(3);
    for (int i = 0; i < 3; ++i) {
        bool f = false;
        cyl[i] = to_cylinder(spec.curves[i].pts, &f);
        flip[i] = f;
        // same polyline, uniform spacing; keeps the step bound reasonable
        resample_uniform(cyl[i]);
        for (size_t j = 0; j < cyl[i].size(); ++j)
            bound = std::min(bound, 0.25 * (at(cyl[i], j + 1) - at(cyl[i], j)).squaredNorm());
    }
    o.dt = dt > 0 ? dt : bound;
#pragma omp parallel for
    for (int i = 0; i < 3; ++i) tr[i] = csf_run(cyl[i], o);

    HomotopyResult res;
    for (int i = 0; i < 3; ++i) {
        for (size_t s = 1; s < tr[i].step_max_z.size(); ++s) {
            if (tr[i].step_max_z[s] > tr[i].step_max_z[s - 1] * (1 + 1e-12) + 1e-15) res.max_z_monotone = false;
            if (tr[i].step_length[s] > tr[i].step_length[s - 1] * (1 + 1e-12)) res.lengths_monotone = false;
        }
        if (tr[i].winding != 1) res.winding_preserved = false;
    }
    for (size_t s = 0; s < tr[0].samples.size(); ++s) {
        BoundarySpec b;
        b.R = R;
        for (int i = 0; i < 3; ++i) {
            BoundaryCurve bc;
            bc.pts = from_cylinder(tr[i].samples[s], R, flip[i]);
            bc.curve_id = spec.curves[i].curve_id;
            b.curves.push_back(std::move(bc));
        }
        ValidationReport rep = validate_boundary(b, group, eps_star);
        for (const auto& bc : b.curves)
            if (std::abs(winding_number(bc.pts)) != 1) res.winding_preserved = false;
        res.max_invariance_residual = std::max(res.max_invariance_residual, rep.invariance_residual);
        if (!rep.admissible)
            throw Error(ErrorKind::HomotopyError,
                        "sample at t = " + std::to_string(tr[0].sample_times[s]) + " not admissible: " + rep.message);
        res.path.push_back(std::move(b));
        res.times.push_back(tr[0].sample_times[s]);
    }
    double dev = 0;
    for (int i = 0; i < 3; ++i) {
        const CylinderCurve& c = tr[i].samples.back();
        double zm = 0;
        for (double z : c.z) zm += z;
        zm /= c.size();
        CylinderCurve flat = c;
        for (auto& z : flat.z) z = zm;
        auto p = from_cylinder(c, R, flip[i]), q = from_cylinder(flat, R, flip[i]);
        for (size_t j = 0; j < p.size(); ++j) dev = std::max(dev, (p[j] - q[j]).norm());
    }
    res.final_circle_deviation = dev;
    spdlog::debug("homotopy: {} samples, deviation {:.3e}", res.path.size(), dev);
    return res;
}

void write_curve_csv(const CylinderCurve& c, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw Error(ErrorKind::InvalidParameter, "cannot write " + path);
    f.precision(17);
    f << "theta,z\n";
    for (size_t j = 0; j < c.size(); ++j) f << c.theta[j] << ',' << c.z[j] << '\n';
}

}  // namespace expander
