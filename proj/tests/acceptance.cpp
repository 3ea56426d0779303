// One PASS/FAIL line per acceptance criterion. Tolerances are fixed here.
#include "expander/boundary.hpp"
#include "expander/cone_tracking.hpp"
#include "expander/csf.hpp"
#include "expander/diagnostics.hpp"
#include "expander/foliation.hpp"
#include "expander/mesh.hpp"
#include "expander/model_surface.hpp"
#include "expander/seeds.hpp"
#include "expander/solver.hpp"
#include "expander/stability.hpp"
#include "expander/symmetry.hpp"

#include <fmt/core.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

using namespace expander;

namespace {

constexpr int kK = 3;
constexpr double kR = 2.0;
constexpr double kHole = 0.04;  // 0.02 R

// criterion 1
constexpr double kOdeResidual = 1e-8;
constexpr double kFoliationSeconds = 1.0;
// criterion 2
constexpr double kZetaTol = 1e-6;
// criterion 3
constexpr double kResidualTol = 1e-3;
constexpr double kSolveSeconds = 600.0;
// criterion 4
constexpr double kCurvatureRel = 0.20;
// criterion 5
constexpr double kStabilityDrift = 0.10;
// criterion 6
constexpr double kMirrorResidual = 1e-12;
// criterion 7
constexpr double kEpsStar = 0.05;
// criterion 8
constexpr double kMonotoneSlack = 1e-3;
constexpr double kConeSlack = 1e-2;
// criterion 9
constexpr double kGaussBonnetRel = 0.02;
constexpr double kFlatResidual = 1e-6;
// criterion 10
constexpr double kMinimality = 1e-3;
constexpr double kLineTol = 1e-2;
constexpr double kAbsCurvatureRel = 0.05;
constexpr double kModelSeconds = 60.0;
// criterion 11
constexpr double kCircleTol = 1e-3;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Solved {
    double s = 0.0;
    double refine = 1.0;
    SolveResult result;
    double seconds = 0.0;
    double eps_max = 0.0;
};

Solved solve_k(double s, double refine = 1.0) {
    auto t0 = std::chrono::steady_clock::now();
    SymmetryGroup g = build_group(kK);
    SeedOptions so;
    so.refine = refine;
    SolveOptions opt;
    opt.tol = kResidualTol;
    SolveResult pre = minimize(reflect_union(seed_annulus(s, kHole, kK, kR, so), kK), g, opt);
    Solved out;
    out.s = s;
    out.refine = refine;
    out.result = minimize(cap_hole(pre.mesh), g, opt);
    out.seconds = seconds_since(t0);
    BoundarySpec b = make_circles_boundary(s, kR, 256);
    validate_boundary(b, &g);
    out.eps_max = b.eps_max;
    return out;
}

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    fmt::print("criterion {:2d} {:<28} {}  {}\n", id, name, pass ? "PASS" : "FAIL", detail);
    std::fflush(stdout);
    if (!pass) ++failures;
}

void guarded(int id, const std::string& name, const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& e) {
        report(id, name, false, std::string("exception: ") + e.what());
    }
}

}  // namespace

int main() {
    spdlog::set_level(spdlog::level::err);

    guarded(1, "foliation fidelity", [] {
        auto t0 = std::chrono::steady_clock::now();
        std::vector<ProfileCurve> c;
        for (double s : {0.1, 0.5, 1.0}) c.push_back(integrate_profile(s, 10.0));
        double el = seconds_since(t0);
        double res = 0;
        for (const auto& p : c) res = std::max(res, profile_ode_residual(p));
        bool ordered = true, cone = true;
        for (size_t i = 0; i < c[0].size(); ++i) {
            ordered = ordered && c[0].f[i] < c[1].f[i] && c[1].f[i] < c[2].f[i];
            double r = i * c[0].dr;
            if (r > 0)
                for (const auto& p : c) cone = cone && p.f[i] > p.epsilon * r;
        }
        report(1, "foliation fidelity", res < kOdeResidual && ordered && cone && el < kFoliationSeconds,
               fmt::format("ode residual {:.2e} (< {:.0e}), ordered {}, cone bound {}, {:.3f} s", res, kOdeResidual,
                           ordered, cone, el));
    });

    guarded(2, "zeta round trip", [] {
        FoliationTable t = build_table(-1.0, 1.0, 0.01, 10.0);
        double worst = 0;
        for (int i = 0; i < 100; ++i) {
            const ProfileCurve& leaf = t.leaves[(i * 37 + 11) % t.leaves.size()];
            double r = 9.9 * ((i * 61) % 100) / 99.0, th = 0.37 * i;
            Vec3 p(r * std::cos(th), r * std::sin(th), leaf.eval(r));
            worst = std::max(worst, std::abs(zeta(p, t) - leaf.s));
        }
        report(2, "zeta round trip", worst < kZetaTol, fmt::format("max |zeta - s| {:.2e} (< {:.0e}) over 100 points", worst, kZetaTol));
    });

    // the solved family shared by criteria 3 to 9 and 12
    std::vector<Solved> family;
    for (double s : {0.10, 0.05, 0.025}) {
        try {
            family.push_back(solve_k(s));
        } catch (const std::exception& e) {
            fmt::print("solve s={} failed: {}\n", s, e.what());
        }
    }
    const Solved* main_run = nullptr;
    for (const auto& f : family)
        if (f.s == 0.05) main_run = &f;

    guarded(3, "circular boundary solve", [&] {
        if (!main_run) throw Error(ErrorKind::NotConverged, "no K(0.05) surface");
        const TriMesh& m = main_run->result.mesh;
        EulerInfo e = euler_and_genus(m);
        std::string type = to_string(classify_type(m));
        SizeResult sz = size_class(m);
        double res = expander_residual(m).max;
        bool ok = main_run->result.converged && e.b == 3 && e.g == 2 && type == "Type1" && !sz.big && res < kResidualTol &&
                  main_run->seconds <= kSolveSeconds;
        report(3, "circular boundary solve", ok,
               fmt::format("converged {}, b {}, genus {}, {}, {} (phi {:.4f}), residual {:.2e} (< {:.0e}), {:.1f} s",
                           main_run->result.converged, e.b, e.g, type, sz.big ? "Big" : "Small", sz.phi_integral, res,
                           kResidualTol, main_run->seconds));
    });

    guarded(4, "total curvature limit", [&] {
        if (family.size() != 3) throw Error(ErrorKind::NotConverged, "family incomplete");
        const double target = 4 * kPi * kK;
        std::vector<double> tc;
        for (const auto& f : family) tc.push_back(total_curvature(f.result.mesh));
        bool mono = std::abs(tc[1] - target) < std::abs(tc[0] - target) && std::abs(tc[2] - target) < std::abs(tc[1] - target);
        double rel = std::abs(tc[2] - target) / target;
        report(4, "total curvature limit", mono && rel < kCurvatureRel,
               fmt::format("s=0.1,0.05,0.025: {:.3f}, {:.3f}, {:.3f} vs 4 pi k = {:.3f}; monotone {}, final {:.2f}% (< {:.0f}%)",
                           tc[0], tc[1], tc[2], target, mono, 100 * rel, 100 * kCurvatureRel));
    });

    guarded(5, "strict stability", [&] {
        if (!main_run) throw Error(ErrorKind::NotConverged, "no K(0.05) surface");
        SymmetryGroup g = build_group(kK);
        StabilityResult a = jacobi_min_eigenvalue(main_run->result.mesh, &g);
        Solved fine = solve_k(0.05, 2.0);
        if (!fine.result.converged) throw Error(ErrorKind::NotConverged, "refined K(0.05) did not converge");
        StabilityResult b = jacobi_min_eigenvalue(fine.result.mesh, &g);
        double drift = std::abs(b.lambda_min - a.lambda_min) / std::abs(a.lambda_min);
        report(5, "strict stability", a.lambda_min > 0 && b.lambda_min > 0 && drift < kStabilityDrift,
               fmt::format("lambda_min {:.4f} (h), {:.4f} (h/2), drift {:.2f}% (< {:.0f}%), subspace {}", a.lambda_min,
                           b.lambda_min, 100 * drift, 100 * kStabilityDrift, a.subspace));
    });

    guarded(6, "type bijection", [&] {
        if (!main_run) throw Error(ErrorKind::NotConverged, "no K(0.05) surface");
        const TriMesh& m = main_run->result.mesh;
        double r0 = expander_residual(m).max;
        Mat3 A = reflection_z() * rotation_z(kPi / kK);
        TriMesh img = transform_mesh(m, A, true);
        double r1 = expander_residual(img).max;
        std::string type = to_string(classify_type(img));
        std::string plain = to_string(classify_type(transform_mesh(m, reflection_z(), true)));
        double floor = std::abs(expander_residual(transform_mesh(m, rotation_z(2 * kPi / kK))).max - r0);
        report(6, "type bijection", std::abs(r1 - r0) < kMirrorResidual && type == "Type2",
               fmt::format("z-mirror o rotation(pi/k): residual change {:.1e} (< {:.0e}), type {}; z-mirror alone gives {}; "
                           "rounding floor from a G_k rotation {:.1e}",
                           std::abs(r1 - r0), kMirrorResidual, type, plain, floor));
    });

    guarded(7, "big/small dichotomy", [&] {
        int counted = 0;
        bool gap_free = true, small_ok = true;
        std::string vals;
        for (const auto& f : family) {
            if (!f.result.converged || f.eps_max > kEpsStar) {
                vals += fmt::format(" s={}:skipped(eps_max {:.4f})", f.s, f.eps_max);
                continue;
            }
            SizeResult sz = size_class(f.result.mesh);
            ++counted;
            gap_free = gap_free && !(sz.phi_integral >= 4.0 / 3.0 && sz.phi_integral <= 5.0 / 3.0);
            if (!sz.big) small_ok = small_ok && sz.phi_integral < 4.0 / 3.0;
            vals += fmt::format(" s={}:{:.4f}", f.s, sz.phi_integral);
        }
        report(7, "big/small dichotomy", counted > 0 && gap_free && small_ok,
               fmt::format("{} admissible surfaces, none in [4/3, 5/3]: {}, small below 4/3: {};{}", counted, gap_free,
                           small_ok, vals));
    });

    guarded(8, "monotonicity", [&] {
        bool ok = !family.empty();
        std::string detail;
        std::vector<double> radii;
        for (int i = 1; i < 20; ++i) radii.push_back(0.05 * i * kR);
        for (const auto& f : family) {
            if (!f.result.converged) continue;
            MonotonicityResult m = monotonicity_series(f.result.mesh, radii, kMonotoneSlack, kConeSlack);
            ok = ok && m.monotone_ok && m.cone_bound_ok;
            detail += fmt::format(" s={}: monotone {}, cone violation {:.2e};", f.s, m.monotone_ok, m.cone_violation);
        }
        report(8, "monotonicity", ok, fmt::format("slack {:.0e}, cone slack {:.0e};{}", kMonotoneSlack, kConeSlack, detail));
    });

    guarded(9, "Gauss-Bonnet residual", [&] {
        bool ok = !family.empty();
        std::string detail;
        for (const auto& f : family) {
            if (!f.result.converged) continue;
            GaussBonnetResult gb = gauss_bonnet_residual(f.result.mesh);
            ok = ok && gb.relative < kGaussBonnetRel;
            detail += fmt::format(" s={}: {:.2f}%;", f.s, 100 * gb.relative);
        }
        GaussBonnetResult flat = gauss_bonnet_residual(make_polar_disk(kR, 20, 8));
        ok = ok && std::abs(flat.residual) < kFlatResidual;
        report(9, "Gauss-Bonnet residual", ok,
               fmt::format("relative (< {:.0f}%):{} flat disk {:.1e} (< {:.0e})", 100 * kGaussBonnetRel, detail,
                           std::abs(flat.residual), kFlatResidual));
    });

    guarded(10, "model surface", [] {
        auto t0 = std::chrono::steady_clock::now();
        ModelChart chart = harmonic_field(256);
        ModelSurface s = weierstrass_reconstruct(chart, {});
        ModelChecks k = model_checks(chart, s);
        double el = seconds_since(t0);
        double rel = std::abs(k.degrees.abs_curvature - 2 * kPi) / (2 * kPi);
        bool ok = k.u_min >= -1 && k.u_max <= 1 && k.u_center == 0.0 && k.minimality_residual < kMinimality &&
                  k.line_deviation < kLineTol && k.degrees.d_plus == 0 && k.degrees.d_minus == 1 && rel < kAbsCurvatureRel &&
                  el < kModelSeconds;
        report(10, "model surface", ok,
               fmt::format("u in [{:.4f}, {:.4f}], u(0) {:.1e}, minimality {:.2e}, lines {:.1e}, degrees ({}, {}), "
                           "int|K| {:.4f} vs 2 pi ({:.2f}%), {:.2f} s",
                           k.u_min, k.u_max, k.u_center, k.minimality_residual, k.line_deviation, k.degrees.d_plus,
                           k.degrees.d_minus, k.degrees.abs_curvature, 100 * rel, el));
    });

    guarded(11, "CSF homotopy", [] {
        SymmetryGroup g = build_group(kK);
        BoundarySpec spec = make_cone_boundary(wiggled_link(), 1.0, kK);
        HomotopyResult h = homotopy_to_circles(spec, 10, &g, 10.0);
        bool ok = h.max_z_monotone && h.winding_preserved && h.final_circle_deviation < kCircleTol;
        report(11, "CSF homotopy", ok,
               fmt::format("max|z| nonincreasing {}, winding preserved {}, final deviation {:.1e} (< {:.0e}), invariance {:.1e}",
                           h.max_z_monotone, h.winding_preserved, h.final_circle_deviation, kCircleTol,
                           h.max_invariance_residual));
    });

    guarded(12, "eta tracking", [&] {
        if (!main_run) throw Error(ErrorKind::NotConverged, "no K(0.05) surface");
        Cone c = cone_from_boundary(make_circles_boundary(0.05, kR, 256));
        ConeTrackingResult t = cone_tracking_checks(main_run->result.mesh, c);
        bool ok = t.conclusive && t.max_pdist_outside <= 16.0 / t.lambda_hat;
        report(12, "eta tracking", ok,
               fmt::format("lambda_hat {:.6f}, R_C {:.1f}, vertices outside R_C {}, max |p| dist outside {:.3e} <= {:.1f}, "
                           "overall max {:.3e}",
                           t.lambda_hat, t.r_c, t.vertices_outside, t.max_pdist_outside, 16.0 / t.lambda_hat, t.max_pdist));
    });

    fmt::print("{} of 12 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
