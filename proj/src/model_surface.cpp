#include "expander/model_surface.hpp"

#include "expander/geometry.hpp"
#include "expander/kernels.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace expander {

namespace {

using Vec3c = Eigen::Vector3cd;  // components in the order (z, x, y)
const Complex kI(0.0, 1.0);

double arg_positive(Complex z) {
    double a = std::arg(z);
    return a < 0 ? a + 2 * kPi : a;
}

Complex w_of_zeta(Complex zeta) { return kI * std::tanh(0.5 * zeta); }

// dX/dzeta with the Gauss map w as the Weierstrass coordinate, axes (z, x, y):
// dz = dF, dx = i (1 + w^2) G, dy = 2 w G with G = dF / (1 - w^2) written without
// the removable zero at w = -1
Vec3c forms_zeta(Complex zeta) {
    Complex w = w_of_zeta(zeta);
    Complex dw = 0.5 * kI * (1.0 + w * w);
    Complex G = -2.0 / (kPi * kI * (w - 1.0) * (w - 1.0) * (w * w + 1.0));
    return Vec3c(model_dF(w), kI * (1.0 + w * w) * G, 2.0 * w * G) * dw;
}

// Gauss-Legendre on [0, 1] with the nodes of boost's table
template <unsigned N, class F>
Vec3c gauss_legendre(F f) {
    using G = boost::math::quadrature::gauss<double, N>;
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    Vec3c s = (N % 2 ? w[0] * f(0.5) : Vec3c(Vec3c::Zero()));
    for (size_t i = N % 2; i < x.size(); ++i) s += w[i] * (f(0.5 + 0.5 * x[i]) + f(0.5 - 0.5 * x[i]));
    return 0.5 * s;
}

// distance from the segment to the pole at zeta = -i pi/2
double singular_distance(Complex a, Complex b) {
    const Complex s(0, -kPi / 2);
    Complex ab = b - a;
    double t = std::clamp(std::real((s - a) * std::conj(ab)) / std::norm(ab), 0.0, 1.0);
    return std::abs(a + t * ab - s);
}

Vec3c integrate_segment(Complex a, Complex b, int depth = 0) {
    double L = std::abs(b - a);
    if (L == 0) return Vec3c::Zero();
    if (L > 0.5 * singular_distance(a, b) && depth < 40) {
        Complex m = 0.5 * (a + b);
        return integrate_segment(a, m, depth + 1) + integrate_segment(m, b, depth + 1);
    }
    auto f = [&](double t) -> Vec3c { return forms_zeta(a + t * (b - a)) * (b - a); };
    return gauss_legendre<10>(f);
}

Vec3 to_xyz(const Vec3c& X) { return Vec3(X[1].real(), X[2].real(), X[0].real()); }

}  // namespace

Complex chart_of_normal(const Vec3& nu) { return Complex(nu.z(), nu.x()) / (1.0 - nu.y()); }

Vec3 normal_of_chart(Complex w) {
    double r2 = std::norm(w);
    return Vec3(2 * w.imag(), r2 - 1, 2 * w.real()) / (1 + r2);
}

double model_u(Complex w) {
    // harmonic measures of J1 (from -i to 1) and J_{-1} (from 1 to i)
    double t1 = arg_positive((1.0 - w) / (-kI - w));
    double tm = arg_positive((kI - w) / (1.0 - w));
    return (t1 - tm) / kPi;
}

double model_ustar(Complex w) {
    return -(2 * std::log(std::abs(w - 1.0)) - std::log(std::abs(w + kI)) - std::log(std::abs(w - kI))) / kPi;
}

Complex model_dF(Complex w) { return (2.0 / (w - 1.0) - 1.0 / (w + kI) - 1.0 / (w - kI)) / (kPi * kI); }

double poisson_u(Complex w, int nquad) {
    double s = 0, r2 = std::norm(w);
    for (int q = 0; q < nquad; ++q) {
        double phi = -kPi / 2 + 2 * kPi * (q + 0.5) / nquad;  // [-pi/2, 3pi/2)
        double f = phi < 0 ? 1.0 : (phi < kPi / 2 ? -1.0 : 0.0);
        if (f == 0) continue;
        s += f * (1 - r2) / std::norm(std::polar(1.0, phi) - w);
    }
    return s / nquad;
}

ModelChart harmonic_field(int resolution) {
    if (resolution < 64) throw Error(ErrorKind::InvalidParameter, "resolution must be at least 64");
    ModelChart c;
    c.n = resolution + 1;
    c.h = 2.0 / resolution;
    const size_t N = static_cast<size_t>(c.n) * c.n;
    c.u.assign(N, std::numeric_limits<double>::quiet_NaN());
    c.ustar.assign(N, std::numeric_limits<double>::quiet_NaN());
    c.min_u = 1, c.max_u = -1;
#pragma omp parallel for schedule(static)
    for (int j = 0; j < c.n; ++j)
        for (int i = 0; i < c.n; ++i) {
            Complex w = c.w_at(i, j);
            if (std::abs(w) >= 1 - 1e-12) continue;
            c.u[static_cast<size_t>(j) * c.n + i] = model_u(w);
            c.ustar[static_cast<size_t>(j) * c.n + i] = model_ustar(w);
        }
    for (double v : c.u)
        if (!std::isnan(v)) c.min_u = std::min(c.min_u, v), c.max_u = std::max(c.max_u, v);
    for (int j = 1; j + 1 < c.n; ++j)
        for (int i = 1; i + 1 < c.n; ++i) {
            if (std::abs(c.w_at(i, j)) > 0.5) continue;
            double l = c.u_at(i + 1, j) + c.u_at(i - 1, j) + c.u_at(i, j + 1) + c.u_at(i, j - 1) - 4 * c.u_at(i, j);
            c.laplacian_residual = std::max(c.laplacian_residual, std::abs(l) / (c.h * c.h));
        }
    return c;
}

ModelSurface weierstrass_reconstruct(const ModelChart& chart, const ModelOptions& opt) {
    (void)chart;
    if (opt.resolution < 8 || !(opt.T > 0) || !(opt.cut > 0) || !(opt.cut < 1))
        throw Error(ErrorKind::InvalidParameter, "bad model options");
    // square cells, resolution of them across the strip; T is rounded to a
    // whole number of cells on each side of the axis
    const int cy = opt.resolution;
    const double hy = kPi / cy, hx = hy;
    const int cx = 2 * std::max(1, static_cast<int>(std::lround(opt.T / hx)));
    const double T = 0.5 * cx * hx;
    const int nx = cx + 1, ny = cy + 1, mid = cx / 2;
    auto zeta_of = [&](int i, int j) { return Complex(-T + i * hx, kPi / 2 - j * hy); };  // row 0 on top
    auto id = [&](int i, int j) { return j * nx + i; };
    const Complex pole(0, -kPi / 2);
    std::vector<char> keep(static_cast<size_t>(nx) * ny, 1);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            if (std::abs(zeta_of(i, j) - pole) < opt.cut) keep[id(i, j)] = 0;

    std::vector<Vec3c> X(keep.size(), Vec3c::Zero()), Y(keep.size(), Vec3c::Zero());
    // path 1: along the top edge from the origin, then down the columns
    for (int i = mid + 1; i < nx; ++i) X[id(i, 0)] = X[id(i - 1, 0)] + integrate_segment(zeta_of(i - 1, 0), zeta_of(i, 0));
    for (int i = mid - 1; i >= 0; --i) X[id(i, 0)] = X[id(i + 1, 0)] + integrate_segment(zeta_of(i + 1, 0), zeta_of(i, 0));
#pragma omp parallel for schedule(static)
    for (int i = 0; i < nx; ++i)
        for (int j = 1; j < ny && keep[id(i, j)]; ++j)
            X[id(i, j)] = X[id(i, j - 1)] + integrate_segment(zeta_of(i, j - 1), zeta_of(i, j));
    // path 2: down the outer columns, then along the rows toward the axis
    for (int j = 0; j < ny; ++j) Y[id(0, j)] = X[id(0, j)], Y[id(nx - 1, j)] = X[id(nx - 1, j)];
#pragma omp parallel for schedule(static)
    for (int j = 0; j < ny; ++j) {
        for (int i = 1; i <= mid && keep[id(i, j)]; ++i)
            Y[id(i, j)] = Y[id(i - 1, j)] + integrate_segment(zeta_of(i - 1, j), zeta_of(i, j));
        for (int i = nx - 2; i >= mid && keep[id(i, j)]; --i)
            Y[id(i, j)] = Y[id(i + 1, j)] + integrate_segment(zeta_of(i + 1, j), zeta_of(i, j));
    }
    ModelSurface s;
    s.nx = nx;
    s.ny = ny;
    for (size_t v = 0; v < X.size(); ++v)
        if (keep[v]) s.period_mismatch = std::max(s.period_mismatch, (X[v] - Y[v]).real().norm());
    if (s.period_mismatch > opt.period_tol)
        throw Error(ErrorKind::ReconstructionError, "integration paths disagree by " + std::to_string(s.period_mismatch));

    // faces of kept vertices, then compact
    std::vector<std::array<int, 3>> F;
    for (int j = 0; j + 1 < ny; ++j)
        for (int i = 0; i + 1 < nx; ++i) {
            int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
            // one diagonal direction everywhere: centrally symmetric stars
            for (const auto& f : {std::array<int, 3>{a, d, c}, std::array<int, 3>{a, c, b}})
                if (keep[f[0]] && keep[f[1]] && keep[f[2]]) F.push_back(f);
        }
    std::vector<int> used(keep.size(), 0), remap(keep.size(), -1);
    for (const auto& f : F)
        for (int v : f) used[v] = 1;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            int v = id(i, j);
            if (!used[v]) continue;
            Complex z = zeta_of(i, j), w = w_of_zeta(z);
            VertexTag t;
            bool edge = j == 0 || j == ny - 1;
            if (edge || i == 0 || i == nx - 1 || !keep[id(i, std::min(j + 1, ny - 1))]) t.curve = curve::kGeneric;
            remap[v] = s.mesh.add_vertex(to_xyz(X[v]), t);
            s.zeta.push_back(z);
            s.chart_normal.push_back(normal_of_chart(w));
            s.on_lines.push_back(edge ? 1 : 0);
            if (i == mid) s.axis.push_back(remap[v]);
            if (!edge) s.height_mismatch = std::max(s.height_mismatch, std::abs(X[v][0].real() - model_u(w)));
        }
    for (auto f : F) s.mesh.F.push_back({remap[f[0]], remap[f[1]], remap[f[2]]});
    // orient so that face normals agree with the Gauss map of the chart
    double agree = 0;
    for (const auto& f : s.mesh.F) {
        Vec3 n = (s.mesh.V[f[1]] - s.mesh.V[f[0]]).cross(s.mesh.V[f[2]] - s.mesh.V[f[0]]);
        agree += n.normalized().dot(s.chart_normal[f[0]] + s.chart_normal[f[1]] + s.chart_normal[f[2]]);
    }
    if (agree < 0) flip_orientation(s.mesh);
    spdlog::debug("model: {} vertices, period mismatch {:.2e}", s.mesh.nv(), s.period_mismatch);
    return s;
}

GaussDegrees gauss_degrees(const TriMesh& mesh) {
    std::vector<Vec3> N;
    std::vector<double> area;
    vertex_normals_serial(mesh.V, mesh.F, N, area);
    double plus = 0, minus = 0, total = 0;
    for (const auto& f : mesh.F) {
        const Vec3 &a = N[f[0]], &b = N[f[1]], &c = N[f[2]];
        double num = a.dot(b.cross(c));
        double den = 1 + a.dot(b) + b.dot(c) + c.dot(a);
        double omega = 2 * std::atan2(num, den);
        Vec3 fn = (mesh.V[f[1]] - mesh.V[f[0]]).cross(mesh.V[f[2]] - mesh.V[f[0]]);
        total += std::abs(omega);
        (fn.y() > 0 ? plus : minus) -= omega;
    }
    GaussDegrees g;
    g.raw_plus = plus / (2 * kPi);
    g.raw_minus = minus / (2 * kPi);
    g.d_plus = static_cast<int>(std::lround(g.raw_plus));
    g.d_minus = static_cast<int>(std::lround(g.raw_minus));
    g.distance = std::max(std::abs(g.raw_plus - g.d_plus), std::abs(g.raw_minus - g.d_minus));
    g.abs_curvature = total;
    if (g.distance > 0.2)
        throw Error(ErrorKind::DegreeUnresolved, "Gauss image areas " + std::to_string(g.raw_plus) + ", " +
                                                     std::to_string(g.raw_minus) + " not near integers");
    return g;
}

ModelChecks model_checks(const ModelChart& chart, const ModelSurface& s) {
    ModelChecks r;
    r.u_min = chart.min_u;
    r.u_max = chart.max_u;
    r.u_center = chart.u_at(chart.n / 2, chart.n / 2);
    const TriMesh& m = s.mesh;
    Topology topo = build_topology(m);
    GeometryCache g = compute_geometry(m, topo);
    for (size_t i = 0; i < m.nv(); ++i)
        if (!topo.boundary_vertex[i]) r.minimality_residual = std::max(r.minimality_residual, g.mean_curvature[i].norm());
    for (int v : s.axis) {
        const Vec3& p = m.V[v];
        r.axis_deviation = std::max({r.axis_deviation, std::hypot(p.y(), p.z()), std::max(p.x(), 0.0)});
    }
    for (size_t v = 0; v < m.nv(); ++v) {
        if (!s.on_lines[v]) continue;
        const Vec3& p = m.V[v];
        double d = std::numeric_limits<double>::infinity();
        for (double c : {-1.0, 0.0, 1.0}) d = std::min(d, std::hypot(p.x(), p.z() - c));
        r.line_deviation = std::max(r.line_deviation, d);
    }
    for (const auto& p : m.V) r.slab_violation = std::max({r.slab_violation, p.x(), std::abs(p.z()) - 1.0});
    r.degrees = gauss_degrees(m);
    // halves split by the axis row
    std::vector<Vec3> N;
    std::vector<double> area;
    vertex_normals_serial(m.V, m.F, N, area);
    double up = 0, down = 0;
    for (const auto& f : m.F) {
        const Vec3 &a = N[f[0]], &b = N[f[1]], &c = N[f[2]];
        double omega = std::abs(2 * std::atan2(a.dot(b.cross(c)), 1 + a.dot(b) + b.dot(c) + c.dot(a)));
        double re = (s.zeta[f[0]] + s.zeta[f[1]] + s.zeta[f[2]]).real();
        (re > 0 ? up : down) += omega;
    }
    r.half_curvature_max = std::max(up, down);
    return r;
}

void write_chart_csv(const ModelChart& c, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw Error(ErrorKind::InvalidParameter, "cannot write " + path);
    f.precision(17);
    f << "re,im,u,ustar\n";
    for (int j = 0; j < c.n; ++j)
        for (int i = 0; i < c.n; ++i) {
            double u = c.u_at(i, j);
            if (std::isnan(u)) continue;
            Complex w = c.w_at(i, j);
            f << w.real() << ',' << w.imag() << ',' << u << ',' << c.ustar[static_cast<size_t>(j) * c.n + i] << '\n';
        }
}

}  // namespace expander
