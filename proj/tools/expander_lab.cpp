// expander-lab: foliate | solve | verify | model | csf | sweep
#include "expander/pipeline.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <iostream>

int main(int argc, char** argv) {
    using namespace expander;
    spdlog::set_default_logger(spdlog::stderr_color_mt("lab"));
    spdlog::set_pattern("[%l] %v");

    RunConfig c;
    CLI::App app{"Numerical laboratory for self-expanding surfaces"};
    app.set_config("--config", "", "flat key=value file; command line flags win over it");
    app.require_subcommand(1, 1);

    app.add_option("--k", c.k, "symmetry order, number of boundary circles")->capture_default_str();
    app.add_option("--R", c.R, "boundary radius")->capture_default_str();
    app.add_option("--s", c.s, "leaf height of the middle circle")->capture_default_str();
    app.add_option("--epsilon-hole,--epsilon_hole", c.epsilon_hole, "radius of the capped hole (default 0.02 R)");
    app.add_option("--tol", c.tol, "residual tolerance (default 1e-3 (1 + R))");
    app.add_option("--max-iter,--max_iter", c.max_iter)->capture_default_str();
    app.add_option("--seed", c.seed, "annulus_reflect | disk | big_double_sheet")->capture_default_str();
    app.add_option("--q-size,--q_size", c.q_size, "mesh size near the symmetry lines")->capture_default_str();
    app.add_option("--refine", c.refine, "uniform mesh size divisor")->capture_default_str();
    app.add_option("--out", c.out, "run directory")->capture_default_str();
    app.add_option("--input", c.input, "mesh to verify (OBJ or PLY)");
    app.add_option("--s-grid,--s_grid", c.s_grid, "a:ds:b or a comma list")->capture_default_str();
    app.add_option("--r-max,--r_max", c.r_max, "profile integration radius")->capture_default_str();
    app.add_option("--resolution", c.resolution, "model lattice cells across the strip")->capture_default_str();
    app.add_option("--strip-length,--strip_length", c.strip_length)->capture_default_str();
    app.add_option("--strip-cut,--strip_cut", c.strip_cut)->capture_default_str();
    app.add_option("--T", c.T, "curve shortening flow time")->capture_default_str();
    app.add_option("--steps", c.steps, "homotopy steps")->capture_default_str();
    app.add_flag("--stability", c.stability, "compute the invariant Jacobi eigenvalue");
    app.add_flag("--cone", c.cone, "verify: run the cone tracking checks for C(s)");
    app.add_option("--jobs", c.jobs, "sweep workers")->capture_default_str();
    app.add_flag("-v,--verbose", c.verbose);

    for (const char* name : {"foliate", "solve", "verify", "model", "csf", "sweep"})
        app.add_subcommand(name)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_code::kUsage;
    }
    c.command = app.get_subcommands().front()->get_name();
    if (c.verbose) spdlog::set_level(spdlog::level::debug);
    return run(c);
}
