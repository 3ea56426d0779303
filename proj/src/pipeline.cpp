#include "expander/pipeline.hpp"

#include "expander/boundary.hpp"
#include "expander/csf.hpp"
#include "expander/foliation.hpp"
#include "expander/model_surface.hpp"
#include "expander/report.hpp"
#include "expander/seeds.hpp"
#include "expander/solver.hpp"
#include "expander/symmetry.hpp"

#include <spdlog/spdlog.h>

#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

extern char** environ;

namespace expander {

namespace fs = std::filesystem;
using J = nlohmann::ordered_json;

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw Error(ErrorKind::InvalidParameter, msg);
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream f(p);
    if (!f) throw Error(ErrorKind::InvalidParameter, "cannot write " + p.string());
    f << text;
}

fs::path prepare_out(const RunConfig& c) {
    fs::path out(c.out);
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw Error(ErrorKind::InvalidParameter, "cannot create output directory " + c.out + ": " + ec.message());
    return out;
}

std::string fmt_double(double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

bool circle_seed(const std::string& s) { return s == "annulus_reflect" || s == "big_double_sheet"; }

int cmd_foliate(const RunConfig& c) {
    std::vector<double> grid = parse_s_grid(c.s_grid);
    require(grid.size() >= 2, "s-grid needs at least two leaves");
    double ds = grid[1] - grid[0];
    for (size_t i = 1; i < grid.size(); ++i)
        require(std::abs(grid[i] - grid[i - 1] - ds) < 1e-9 * std::max(1.0, std::abs(ds)),
                "foliate needs a uniform s-grid a:ds:b");
    fs::path out = prepare_out(c);
    FoliationTable t = build_table(grid.front(), grid.back(), ds, c.r_max);
    write_table_csv(t, (out / "foliation.csv").string(), c.R);
    J j;
    j["schema_version"] = kReportSchemaVersion;
    j["config"] = config_json(c);
    j["leaves"] = t.leaves.size();
    double worst = 0.0;
    J eps = J::array();
    for (const auto& leaf : t.leaves) {
        worst = std::max(worst, profile_ode_residual(leaf));
        eps.push_back(J{{"s", leaf.s}, {"epsilon", leaf.epsilon}, {"epsilon_converged", leaf.epsilon_converged}});
    }
    j["max_ode_residual"] = worst;
    j["asymptotic_slopes"] = eps;
    write_text(out / "report.json", j.dump(2) + "\n");
    spdlog::info("foliation table with {} leaves written to {}", t.leaves.size(), (out / "foliation.csv").string());
    return exit_code::kOk;
}

int cmd_solve(const RunConfig& c) {
    if (circle_seed(c.seed))
        require(c.s > 0, "s = " + fmt_double(c.s) +
                             " is not admissible: the three circle boundary needs s > 0 so that the circles are disjoint");
    fs::path out = prepare_out(c);
    SymmetryGroup g = build_group(c.k);
    SeedOptions so;
    so.q_size = c.q_size;
    so.refine = c.refine;
    SolveOptions opt;
    opt.tol = c.tolerance();
    opt.max_iter = c.max_iter;
    opt.verbose = c.verbose;

    if (circle_seed(c.seed)) {
        BoundarySpec b = make_circles_boundary(c.s, c.R, 256);
        ValidationReport v = validate_boundary(b, &g);
        if (!v.admissible) spdlog::warn("boundary C(s) not in the admissible class: {}", v.message);
    }

    SolveResult r;
    if (c.seed == "annulus_reflect") {
        TriMesh seed = reflect_union(seed_annulus(c.s, c.hole(), c.k, c.R, so), c.k);
        SolveResult pre = minimize(seed, g, opt);
        spdlog::info("pre-cap solve: residual {:.3g} after {} iterations", pre.residual_max, pre.iterations);
        r = minimize(cap_hole(pre.mesh), g, opt);
        r.iterations += pre.iterations;
        std::vector<IterationRecord> h = pre.history;
        h.insert(h.end(), r.history.begin(), r.history.end());
        r.history = std::move(h);
    } else if (c.seed == "disk") {
        r = minimize(seed_disk(c.k, c.R, so), g, opt);
    } else if (c.seed == "big_double_sheet") {
        r = minimize(seed_big_double_sheet(c.s, c.k, c.R, so), g, opt);
    } else {
        throw Error(ErrorKind::InvalidParameter, "unknown seed " + c.seed);
    }

    DiagnosticsOptions d;
    d.k = c.k;
    d.R = c.R;
    d.s = c.s;
    d.stability = c.stability;
    d.cone = circle_seed(c.seed);
    DiagnosticsReport rep;
    try {
        rep = run_diagnostics(r.mesh, d);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::Inconclusive) throw;
        spdlog::warn("cone tracking inconclusive: {}", e.what());
        d.cone = false;
        rep = run_diagnostics(r.mesh, d);
    }
    save_mesh(r.mesh, (out / "mesh.obj").string());
    write_history_csv(r, (out / "history.csv").string());
    write_series_csv(rep.monotonicity, (out / "series.csv").string());
    write_text(out / "report.json", emit_report(rep, &r, config_json(c)));
    spdlog::info("genus {} with {} boundary loops, {} {}, residual {:.3g}", rep.genus, rep.boundary_loops, rep.type,
                 rep.size.big ? "Big" : "Small", rep.residual_max);
    if (!r.converged) {
        spdlog::error("not converged: {}", r.message);
        return exit_code::kNotConverged;
    }
    return exit_code::kOk;
}

int cmd_verify(const RunConfig& c) {
    require(!c.input.empty(), "verify needs --input");
    TriMesh m = load_mesh(c.input);
    fs::path out = prepare_out(c);
    DiagnosticsOptions d;
    d.k = c.k;
    d.R = c.R;
    d.s = c.s;
    d.stability = c.stability;
    d.cone = c.cone;
    DiagnosticsReport rep = run_diagnostics(m, d);
    write_series_csv(rep.monotonicity, (out / "series.csv").string());
    write_text(out / "report.json", emit_report(rep, nullptr, config_json(c)));
    spdlog::info("genus {}, {} boundary loops, {} {}", rep.genus, rep.boundary_loops, rep.type, rep.size.big ? "Big" : "Small");
    return exit_code::kOk;
}

int cmd_model(const RunConfig& c) {
    fs::path out = prepare_out(c);
    ModelChart chart = harmonic_field(c.resolution);
    ModelOptions mo;
    mo.resolution = c.resolution;
    mo.T = c.strip_length;
    mo.cut = c.strip_cut;
    ModelSurface s = weierstrass_reconstruct(chart, mo);
    ModelChecks k = model_checks(chart, s);
    save_mesh(s.mesh, (out / "mesh.obj").string());
    write_chart_csv(chart, (out / "chart.csv").string());
    J j;
    j["schema_version"] = kReportSchemaVersion;
    j["config"] = config_json(c);
    j["harmonic"] = J{{"u_min", k.u_min}, {"u_max", k.u_max}, {"u_center", k.u_center},
                      {"laplacian_residual", chart.laplacian_residual}};
    j["mesh"] = J{{"vertices", s.mesh.nv()}, {"faces", s.mesh.F.size()}, {"nx", s.nx}, {"ny", s.ny},
                  {"period_mismatch", s.period_mismatch}, {"height_mismatch", s.height_mismatch}};
    j["minimality_residual"] = k.minimality_residual;
    j["axis_deviation"] = k.axis_deviation;
    j["line_deviation"] = k.line_deviation;
    j["slab_violation"] = k.slab_violation;
    j["gauss_degrees"] = J{{"d_plus", k.degrees.d_plus}, {"d_minus", k.degrees.d_minus},
                           {"raw_plus", k.degrees.raw_plus}, {"raw_minus", k.degrees.raw_minus},
                           {"distance", k.degrees.distance}};
    j["abs_curvature"] = k.degrees.abs_curvature;
    j["abs_curvature_target"] = 2 * kPi;
    j["half_curvature_max"] = k.half_curvature_max;
    write_text(out / "report.json", j.dump(2) + "\n");
    spdlog::info("model surface: degrees ({}, {}), int|K| = {:.4f}", k.degrees.d_plus, k.degrees.d_minus,
                 k.degrees.abs_curvature);
    return exit_code::kOk;
}

int cmd_csf(const RunConfig& c) {
    require(c.T > 0 && c.steps >= 1, "csf needs T > 0 and steps >= 1");
    fs::path out = prepare_out(c);
    SymmetryGroup g = build_group(c.k);
    BoundarySpec spec = make_cone_boundary(wiggled_link(), c.R, c.k);
    HomotopyResult h = homotopy_to_circles(spec, c.steps, &g, c.T);
    J steps = J::array();
    for (size_t i = 0; i < h.path.size(); ++i) {
        write_boundary_csv(h.path[i], (out / ("step_" + std::to_string(i))).string());
        steps.push_back(J{{"t", h.times[i]}, {"eps_max", h.path[i].eps_max}});
    }
    J j;
    j["schema_version"] = kReportSchemaVersion;
    j["config"] = config_json(c);
    j["steps"] = steps;
    j["max_invariance_residual"] = h.max_invariance_residual;
    j["max_z_monotone"] = h.max_z_monotone;
    j["winding_preserved"] = h.winding_preserved;
    j["lengths_monotone"] = h.lengths_monotone;
    j["final_circle_deviation"] = h.final_circle_deviation;
    write_text(out / "report.json", j.dump(2) + "\n");
    spdlog::info("csf homotopy: monotone {}, final deviation {:.3g}", h.max_z_monotone, h.final_circle_deviation);
    return exit_code::kOk;
}

int cmd_sweep(const RunConfig& c) {
    std::vector<double> grid = parse_s_grid(c.s_grid);
    for (double s : grid) require(s > 0, "sweep values must be admissible, s > 0; got " + fmt_double(s));
    fs::path out = prepare_out(c);
    std::string self = fs::read_symlink("/proc/self/exe").string();

    std::vector<int> codes(grid.size(), exit_code::kInternal);
    std::vector<std::string> dirs(grid.size());
    size_t next = 0, running = 0;
    std::vector<std::pair<pid_t, size_t>> live;
    int jobs = std::max(1, c.jobs);
    while (next < grid.size() || running > 0) {
        while (next < grid.size() && static_cast<int>(running) < jobs) {
            dirs[next] = (out / ("s_" + std::to_string(next))).string();
            std::vector<std::string> args = {self,       "solve",     "--k",      std::to_string(c.k),
                                             "--R",      fmt_double(c.R), "--s", fmt_double(grid[next]),
                                             "--seed",   c.seed,      "--out",    dirs[next],
                                             "--tol",    fmt_double(c.tolerance()), "--max-iter", std::to_string(c.max_iter),
                                             "--epsilon-hole", fmt_double(c.hole()), "--q-size", fmt_double(c.q_size),
                                             "--refine", std::to_string(c.refine)};
            if (c.stability) args.push_back("--stability");
            std::vector<char*> argv;
            for (auto& a : args) argv.push_back(a.data());
            argv.push_back(nullptr);
            pid_t pid;
            if (posix_spawn(&pid, self.c_str(), nullptr, nullptr, argv.data(), environ) != 0)
                throw Error(ErrorKind::InvalidParameter, "cannot spawn worker for s = " + fmt_double(grid[next]));
            live.emplace_back(pid, next);
            ++running;
            ++next;
        }
        int status = 0;
        pid_t done = wait(&status);
        if (done < 0) break;
        for (auto it = live.begin(); it != live.end(); ++it)
            if (it->first == done) {
                codes[it->second] = WIFEXITED(status) ? WEXITSTATUS(status) : exit_code::kInternal;
                live.erase(it);
                --running;
                break;
            }
    }

    J runs = J::array();
    int worst = exit_code::kOk;
    for (size_t i = 0; i < grid.size(); ++i) {
        J r{{"s", grid[i]}, {"dir", fs::path(dirs[i]).filename().string()}, {"exit", codes[i]}};
        std::ifstream f(fs::path(dirs[i]) / "report.json");
        if (f) {
            J rep = J::parse(f, nullptr, false);
            if (!rep.is_discarded())
                for (const char* key : {"genus", "type", "size", "phi_integral", "total_curvature"})
                    if (rep.contains(key)) r[key] = rep[key];
        }
        runs.push_back(r);
        worst = std::max(worst, codes[i]);
    }
    J j;
    j["schema_version"] = kReportSchemaVersion;
    j["config"] = config_json(c);
    j["runs"] = runs;
    write_text(out / "sweep.json", j.dump(2) + "\n");
    return worst;
}

}  // namespace

std::vector<double> parse_s_grid(const std::string& spec) {
    std::vector<double> v;
    auto num = [&](const std::string& t) {
        try {
            size_t used = 0;
            double x = std::stod(t, &used);
            if (used != t.size()) throw std::invalid_argument(t);
            return x;
        } catch (const std::exception&) {
            throw Error(ErrorKind::InvalidParameter, "bad number '" + t + "' in s-grid " + spec);
        }
    };
    if (spec.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(spec);
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
        require(parts.size() == 3, "s-grid must be a:ds:b, got " + spec);
        double a = num(parts[0]), ds = num(parts[1]), b = num(parts[2]);
        require(ds > 0 && b >= a, "s-grid needs ds > 0 and b >= a");
        long n = std::lround(std::floor((b - a) / ds + 1e-9));
        require(n < 100000, "s-grid too long");
        for (long i = 0; i <= n; ++i) v.push_back(a + i * ds);
    } else {
        std::stringstream ss(spec);
        for (std::string p; std::getline(ss, p, ',');)
            if (!p.empty()) v.push_back(num(p));
    }
    require(!v.empty(), "empty s-grid");
    return v;
}

void validate_config(const RunConfig& c) {
    static const std::vector<std::string> cmds = {"foliate", "solve", "verify", "model", "csf", "sweep"};
    require(std::find(cmds.begin(), cmds.end(), c.command) != cmds.end(), "unknown command " + c.command);
    require(c.k >= 2 && c.k <= 64, "k must be in [2, 64]");
    require(c.R > 0 && std::isfinite(c.R), "R must be positive");
    require(c.hole() > 0 && c.hole() < 0.25 * c.R, "epsilon_hole must be in (0, R/4)");
    require(c.tolerance() > 0, "tol must be positive");
    require(c.max_iter > 0, "max_iter must be positive");
    require(c.seed == "annulus_reflect" || c.seed == "disk" || c.seed == "big_double_sheet",
            "seed must be annulus_reflect, disk or big_double_sheet");
    require(c.q_size > 0 && c.refine >= 1, "q_size must be positive and refine >= 1");
    require(c.r_max > 0, "r_max must be positive");
    require(c.resolution >= 64, "resolution must be at least 64");
    require(c.strip_length > 0 && c.strip_cut > 0 && c.strip_cut < 1, "strip_length > 0 and strip_cut in (0, 1)");
    require(c.jobs >= 1, "jobs must be at least 1");
}

J config_json(const RunConfig& c) {
    J j;
    j["command"] = c.command;
    j["k"] = c.k;
    j["R"] = c.R;
    j["s"] = c.s;
    j["epsilon_hole"] = c.hole();
    j["tol"] = c.tolerance();
    j["max_iter"] = c.max_iter;
    j["seed"] = c.seed;
    j["q_size"] = c.q_size;
    j["refine"] = c.refine;
    if (!c.input.empty()) j["input"] = c.input;
    j["s_grid"] = c.s_grid;
    j["r_max"] = c.r_max;
    j["resolution"] = c.resolution;
    j["strip_length"] = c.strip_length;
    j["strip_cut"] = c.strip_cut;
    j["T"] = c.T;
    j["steps"] = c.steps;
    j["stability"] = c.stability;
    return j;
}

int run(const RunConfig& c) {
    try {
        validate_config(c);
        if (c.command == "foliate") return cmd_foliate(c);
        if (c.command == "solve") return cmd_solve(c);
        if (c.command == "verify") return cmd_verify(c);
        if (c.command == "model") return cmd_model(c);
        if (c.command == "csf") return cmd_csf(c);
        return cmd_sweep(c);
    } catch (const Error& e) {
        spdlog::error("{}", e.what());
        switch (e.kind()) {
            case ErrorKind::NotConverged: return exit_code::kNotConverged;
            case ErrorKind::InvalidParameter:
            case ErrorKind::SymmetryMismatch:
            case ErrorKind::RejectedBoundary:
            case ErrorKind::OutOfRange:
            case ErrorKind::ParseError: return exit_code::kValidation;
            default: return exit_code::kInternal;
        }
    } catch (const std::exception& e) {
        spdlog::error("internal error: {}", e.what());
        return exit_code::kInternal;
    }
}

}  // namespace expander
