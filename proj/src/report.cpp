#include "expander/report.hpp"

#include "expander/kernels.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <fstream>

namespace expander {

DiagnosticsReport run_diagnostics(const TriMesh& mesh, const DiagnosticsOptions& opt) {
    DiagnosticsReport d;
    EulerInfo e = euler_and_genus(mesh);
    d.chi = e.chi;
    d.boundary_loops = e.b;
    d.genus = e.g;
    d.components = e.components;
    try {
        d.type = to_string(classify_type(mesh));
    } catch (const Error& err) {
        if (err.kind() != ErrorKind::ClassificationUnavailable) throw;
        d.type = to_string(SurfaceType::Other);
        d.type_message = err.what();
    }
    d.size = size_class(mesh);
    std::vector<double> radii = opt.radii;
    if (radii.empty())
        for (int i = 1; i <= 10; ++i) radii.push_back(0.1 * i * opt.R);
    d.monotonicity = monotonicity_series(mesh, radii);
    d.gauss_bonnet = gauss_bonnet_residual(mesh);
    d.total_curvature_target = 4 * kPi * opt.k;
    ResidualResult r = expander_residual(mesh);
    d.residual_max = r.max;
    d.residual_l2 = r.l2;
    d.min_quality = min_triangle_quality(mesh);
    d.eps_star = opt.eps_star;
    Topology t = build_topology(mesh);
    for (size_t i = 0; i < mesh.nv(); ++i)
        if (t.boundary_vertex[i]) {
            const Vec3& p = mesh.V[i];
            double rho = std::hypot(p.x(), p.y());
            if (rho > 0) d.eps_max = std::max(d.eps_max, std::abs(p.z()) / rho);
        }
    d.boundary_admissible = d.eps_max <= opt.eps_star;
    if (opt.stability) {
        SymmetryGroup g = build_group(opt.k);
        d.stability = jacobi_min_eigenvalue(mesh, &g);
    }
    if (opt.cone && opt.s > 0) {
        Cone c = cone_from_boundary(make_circles_boundary(opt.s, opt.R, 256));
        d.cone = cone_tracking_checks(mesh, c);
    }
    return d;
}

nlohmann::ordered_json report_json(const DiagnosticsReport& d, const SolveResult* solve, const nlohmann::ordered_json& config) {
    using J = nlohmann::ordered_json;
    J j;
    j["schema_version"] = kReportSchemaVersion;
    if (!config.is_null()) j["config"] = config;
    if (solve) {
        J s;
        s["converged"] = solve->converged;
        s["iterations"] = solve->iterations;
        s["weighted_area"] = solve->weighted_area;
        s["residual_max"] = solve->residual_max;
        s["residual_l2"] = solve->residual_l2;
        s["message"] = solve->message;
        j["solve"] = s;
    }
    J topo;
    topo["chi"] = d.chi;
    topo["boundary_loops"] = d.boundary_loops;
    topo["genus"] = d.genus;
    topo["components"] = d.components;
    j["topology"] = topo;
    j["genus"] = d.genus;
    j["type"] = d.type;
    if (!d.type_message.empty()) j["type_message"] = d.type_message;
    j["phi_integral"] = d.size.phi_integral;
    j["size"] = d.size.big ? "Big" : "Small";
    J dich;
    dich["big_threshold"] = 1.5;
    dich["gap"] = J::array({4.0 / 3.0, 5.0 / 3.0});
    dich["dichotomy_ok"] = d.size.dichotomy_ok;
    dich["eps_max"] = d.eps_max;
    dich["eps_star"] = d.eps_star;
    dich["boundary_admissible"] = d.boundary_admissible;
    j["dichotomy"] = dich;
    J res;
    res["max"] = d.residual_max;
    res["l2"] = d.residual_l2;
    j["expander_residual"] = res;
    j["min_triangle_quality"] = d.min_quality;
    J mono;
    mono["slack"] = 1e-3;
    mono["monotone_ok"] = d.monotonicity.monotone_ok;
    mono["area"] = d.monotonicity.area;
    mono["half_boundary_integral"] = d.monotonicity.boundary_integral;
    mono["cone_violation"] = d.monotonicity.cone_violation;
    mono["cone_slack"] = 1e-2;
    mono["cone_bound_ok"] = d.monotonicity.cone_bound_ok;
    J series = J::array();
    for (const auto& e : d.monotonicity.series) series.push_back(J{{"r", e.r}, {"ratio", e.ratio}, {"excluded", e.excluded}});
    mono["series"] = series;
    j["monotonicity"] = mono;
    J gb;
    gb["total_curvature"] = d.gauss_bonnet.total_curvature;
    gb["support_term"] = d.gauss_bonnet.support_term;
    gb["boundary_term"] = d.gauss_bonnet.boundary_term;
    gb["euler_term"] = d.gauss_bonnet.euler_term;
    gb["chi"] = d.gauss_bonnet.chi;
    gb["residual"] = d.gauss_bonnet.residual;
    gb["relative"] = d.gauss_bonnet.relative;
    j["gauss_bonnet"] = gb;
    j["total_curvature"] = d.gauss_bonnet.total_curvature;
    J tc;
    tc["target_4pik"] = d.total_curvature_target;
    tc["relative_error"] = std::abs(d.gauss_bonnet.total_curvature - d.total_curvature_target) / d.total_curvature_target;
    j["total_curvature_limit"] = tc;
    if (d.stability) {
        J st;
        st["subspace"] = d.stability->subspace;
        st["dimension"] = d.stability->dimension;
        st["lambda_min"] = d.stability->lambda_min;
        st["converged"] = d.stability->converged;
        st["strictly_stable"] = d.stability->lambda_min > 0;
        j["stability"] = st;
    }
    if (d.cone) {
        const auto& c = *d.cone;
        J et;
        et["lambda_hat"] = c.lambda_hat;
        et["eta"] = c.eta;
        et["r_c"] = c.r_c;
        et["max_pdist"] = c.max_pdist;
        et["max_pdist_outside_rc"] = c.max_pdist_outside;
        et["vertices_outside_rc"] = c.vertices_outside;
        et["eta_ok"] = c.eta_ok;
        j["eta_tracking"] = et;
        J gr;
        gr["r_tilde"] = c.r_tilde;
        gr["max_angle"] = c.max_angle;
        gr["projection_injective"] = c.projection_injective;
        j["graphicality"] = gr;
    }
    return j;
}

std::string emit_report(const DiagnosticsReport& d, const SolveResult* solve, const nlohmann::ordered_json& config) {
    return report_json(d, solve, config).dump(2) + "\n";
}

void write_history_csv(const SolveResult& r, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw Error(ErrorKind::InvalidParameter, "cannot write " + path);
    f.precision(17);
    f << "iter,weighted_area,residual_max,residual_l2,step,newton\n";
    for (const auto& h : r.history)
        f << h.iter << ',' << h.area << ',' << h.residual_max << ',' << h.residual_l2 << ',' << h.step << ',' << h.newton << '\n';
}

void write_series_csv(const MonotonicityResult& m, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw Error(ErrorKind::InvalidParameter, "cannot write " + path);
    f.precision(17);
    f << "r,ratio,excluded\n";
    for (const auto& e : m.series) f << e.r << ',' << e.ratio << ',' << e.excluded << '\n';
}

}  // namespace expander
