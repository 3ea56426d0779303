#pragma once

#include "expander/cone_tracking.hpp"
#include "expander/diagnostics.hpp"
#include "expander/solver.hpp"
#include "expander/stability.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace expander {

constexpr int kReportSchemaVersion = 1;

struct DiagnosticsOptions {
    int k = 3;
    double R = 2.0;
    double s = 0.0;                 // > 0: three circle cone data C(s) for eta tracking
    bool stability = false;
    bool cone = false;
    std::vector<double> radii;      // empty: 0.1 R, 0.2 R, ..., R
    double eps_star = 0.05;
};

struct DiagnosticsReport {
    int chi = 0, boundary_loops = 0, genus = 0, components = 1;
    std::string type = "Other";
    std::string type_message;  // set when the mesh cannot be classified
    SizeResult size;
    MonotonicityResult monotonicity;
    GaussBonnetResult gauss_bonnet;
    double total_curvature_target = 0.0;  // 4 pi k
    double residual_max = 0.0, residual_l2 = 0.0;
    double eps_max = 0.0;                 // max |z| / rho over boundary vertices
    bool boundary_admissible = false;     // eps_max <= eps_star
    double eps_star = 0.05;
    std::optional<StabilityResult> stability;
    std::optional<ConeTrackingResult> cone;
    double min_quality = 0.0;
};

DiagnosticsReport run_diagnostics(const TriMesh& mesh, const DiagnosticsOptions& opt);

// Fields in a fixed order; every boolean sits next to the numbers and
// thresholds it is computed from.
nlohmann::ordered_json report_json(const DiagnosticsReport& d, const SolveResult* solve = nullptr,
                                   const nlohmann::ordered_json& config = {});
std::string emit_report(const DiagnosticsReport& d, const SolveResult* solve = nullptr,
                        const nlohmann::ordered_json& config = {});

void write_history_csv(const SolveResult& r, const std::string& path);
void write_series_csv(const MonotonicityResult& m, const std::string& path);

}  // namespace expander
