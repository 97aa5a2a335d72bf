#include "membrane/experiments.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <stdexcept>

#include "membrane/analysis.hpp"
#include "membrane/boundary.hpp"
#include "membrane/cones.hpp"
#include "membrane/io.hpp"
#include "membrane/solver.hpp"
#include "membrane/spectral.hpp"

namespace membrane {

namespace {

namespace fs = std::filesystem;
constexpr double kPi = std::numbers::pi;

const std::set<std::string> kKnownKeys = {
    "solver.max_outer", "solver.step0",  "solver.backtrack", "solver.armijo",
    "solver.inner_tol", "solver.tau",    "solver.runs",      "solver.seed",
    "solver.amplitude", "solver.accelerate", "solver.delta0", "solver.ratio",
    "solver.delta_min", "experiment.resolution", "experiment.M",
};

SolveConfig solver_config(const Config& cfg, const ExperimentOptions& opts,
                          int default_runs) {
    SolveConfig sc;
    sc.max_outer = int(cfg.get_int("solver.max_outer", sc.max_outer));
    sc.step0 = cfg.get_double("solver.step0", sc.step0);
    sc.backtrack = cfg.get_double("solver.backtrack", sc.backtrack);
    sc.armijo = cfg.get_double("solver.armijo", sc.armijo);
    sc.inner_tol = cfg.get_double("solver.inner_tol", sc.inner_tol);
    sc.tau = cfg.get_double("solver.tau", sc.tau);
    sc.multi_start.count = int(cfg.get_int("solver.runs", default_runs));
    sc.multi_start.amplitude_factor =
        cfg.get_double("solver.amplitude", sc.multi_start.amplitude_factor);
    sc.multi_start.seed =
        std::uint64_t(cfg.get_int("solver.seed", long(sc.multi_start.seed)));
    if (opts.seed) sc.multi_start.seed = *opts.seed;
    sc.accelerate = cfg.get_bool("solver.accelerate", sc.accelerate);
    if (cfg.has("solver.delta0") || cfg.has("solver.delta_min")) {
        SmoothingSchedule sched;
        sched.delta0 = cfg.get_double("solver.delta0", sched.delta0);
        sched.ratio = cfg.get_double("solver.ratio", sched.ratio);
        sched.delta_min = cfg.get_double("solver.delta_min", sched.delta_min);
        sc.schedule = sched;
    }
    return sc;
}

ExperimentManifest start_manifest(const std::string& id,
                                  const ExperimentOptions& opts,
                                  const SolveConfig& sc, int resolution) {
    ExperimentManifest m;
    m.id = id;
    m.seed = sc.multi_start.seed;
    m.config_echo = opts.config.entries();
    m.config_echo["effective.resolution"] = std::to_string(resolution);
    m.config_echo["effective.runs"] = std::to_string(sc.multi_start.count);
    m.config_echo["effective.seed"] = std::to_string(sc.multi_start.seed);
    return m;
}

std::string art(const ExperimentOptions& opts, ExperimentManifest& m,
                const std::string& name) {
    const std::string path = (fs::path(opts.out_dir) / name).string();
    m.artifacts.push_back(path);
    return path;
}

void note_solver(ExperimentManifest& m, const SolveResult& res,
                 const std::string& prefix = "") {
    m.metrics[prefix + "iterations"] = res.iterations;
    m.metrics[prefix + "converged"] = res.converged ? 1.0 : 0.0;
    m.metrics[prefix + "energy"] = res.report.total;
    m.metrics[prefix + "dirichlet"] = res.report.dirichlet;
    m.metrics[prefix + "potential"] = res.report.potential;
    if (!res.converged) {
        m.flagged = true;
        if (m.flag_reason.empty()) m.flag_reason = "solver did not converge";
    }
}

ExperimentManifest run_fig3(const ExperimentOptions& opts) {
    const int res = opts.resolution.value_or(
        int(opts.config.get_int("experiment.resolution", 512)));
    const double h = 1.0 / res;
    const Grid grid = Grid::make_1d(-1.0, 1.0, 2 * res);
    SolveConfig sc = solver_config(opts.config, opts, 4);
    ExperimentManifest m = start_manifest("fig3-1d", opts, sc, res);

    const BoundaryData bdata{ConeTrace{ConeSpec::triple_critical(), 0.0, 0.0}};
    const SolveResult sol = solve(grid, 3, bdata, std::nullopt, sc);
    note_solver(m, sol);

    double sup = 0;
    for (int p = 0; p < grid.nodes(0); ++p) {
        const auto exact = explicit_1d_minimizer(grid.node_x(p));
        for (int i = 0; i < 3; ++i)
            sup = std::max(sup, std::fabs(sol.stack.value(i, p) - exact[i]));
    }
    m.metrics["sup_distance"] = sup;
    m.metrics["h"] = h;
    m.metrics["tau"] = sol.tau;
    m.metrics["energy_closed_form"] = std::sqrt(6.0) + std::sqrt(2.0);

    const FreeBoundarySet fb = extract_free_boundaries(sol.stack, sol.tau);
    for (int i = 0; i < 2; ++i) {
        if (fb.gamma[i].size() == 1 && fb.gamma[i][0].pts.size() == 1) {
            const double kink = fb.gamma[i][0].pts[0][0];
            m.metrics["kink_" + std::to_string(i + 1)] = kink;
            m.metrics["equipartition_" + std::to_string(i + 1)] =
                equipartition_residual(sol.stack, kink, 16, sol.tau);
        } else {
            m.flagged = true;
            m.flag_reason = "expected a single branch point per pair";
        }
    }

    write_stack(art(opts, m, "solution.stack"), sol.stack);
    {
        std::ofstream csv(art(opts, m, "profile.csv"));
        csv << "x,u1,u2,u3,exact1,exact2,exact3\n";
        for (int p = 0; p < grid.nodes(0); ++p) {
            const double x = grid.node_x(p);
            const auto e = explicit_1d_minimizer(x);
            csv << format_full(x);
            for (int i = 0; i < 3; ++i) csv << "," << format_full(sol.stack.value(i, p));
            for (int i = 0; i < 3; ++i) csv << "," << format_full(e[i]);
            csv << "\n";
        }
    }
    return m;
}

// phi(x1) U_{0,1}(x2) + (1 - phi(x1)) U_{0,2}(x2), smoothstep phi on [-1, 1];
// the 1D cones vary along the short axis
MembraneStack blended_rectangle_field(const Grid& grid) {
    const ConeSpec u01 = ConeSpec::one_d(3, 1);
    const ConeSpec u02 = ConeSpec::one_d(3, 2);
    MembraneStack stack(grid, 3, 1e-9);
    for (int iy = 0; iy < grid.nodes(1); ++iy) {
        const auto a = evaluate_cone(u01, grid.node_y(iy));
        const auto b = evaluate_cone(u02, grid.node_y(iy));
        for (int ix = 0; ix < grid.nodes(0); ++ix) {
            const double phi = smoothstep((grid.node_x(ix) + 1) / 2);
            const std::size_t p = grid.node_index(ix, iy);
            for (int i = 0; i < 3; ++i)
                stack.field(i)[p] = phi * a[i] + (1 - phi) * b[i];
        }
    }
    return stack;
}

ExperimentManifest run_rectangle(const ExperimentOptions& opts) {
    const int res = opts.resolution.value_or(
        int(opts.config.get_int("experiment.resolution", 64)));
    const double big_m = opts.config.get_double("experiment.M", 6.0);
    if (big_m < 4) throw std::invalid_argument("rectangle-junction: M >= 4 required");
    const double h = 1.0 / res;
    const Grid grid = Grid::make_2d(-big_m, big_m, -1.0, 1.0,
                                    int(std::lround(2 * big_m * res)), 2 * res);
    SolveConfig sc = solver_config(opts.config, opts, 1);
    ExperimentManifest m = start_manifest("rectangle-junction", opts, sc, res);
    m.config_echo["effective.M"] = format_full(big_m);

    const MembraneStack data = blended_rectangle_field(grid);
    const BoundaryData bdata{ExplicitTrace{data}};
    const SolveResult sol = solve(grid, 3, bdata, data, sc);
    note_solver(m, sol);
    m.metrics["h"] = h;
    m.metrics["tau"] = sol.tau;

    const FreeBoundarySet fb = extract_free_boundaries(sol.stack, sol.tau);
    m.metrics["junction_count"] = double(fb.junctions.size());
    if (fb.junctions.empty()) {
        m.flagged = true;
        m.flag_reason = "no junction found";
    } else {
        // the construction produces one junction strip; take the first cluster
        const Point j = fb.junctions.front();
        m.metrics["junction_x"] = j[0];
        m.metrics["junction_y"] = j[1];
        const JunctionFit fit = junction_fit(sol.stack, j, 0.5);
        m.metrics["fit_rotation"] = fit.rotation;
        m.metrics["fit_residual"] = fit.residual;
        m.metrics["fit_classified"] = fit.classified ? 1.0 : 0.0;

        const double r = 0.3;
        const WeissProfile wp =
            weiss_profile(sol.stack, j, {r, 0.5 * (r + 0.45), 0.45}, sol.tau);
        m.metrics["weiss_phi_r03"] = wp.phi.front();
        m.metrics["weiss_min_increment"] = wp.min_increment;
        write_weiss_csv(art(opts, m, "weiss_junction.csv"), wp);
    }

    // one-phase windows: the surviving free boundary flips across the blend
    auto count_near = [&](int pair, double x0) {
        int count = 0;
        for (const Polyline& line : fb.gamma[pair])
            for (const Point& p : line.pts)
                if (std::fabs(p[0] - x0) < 0.5) ++count;
        return double(count);
    };
    m.metrics["gamma1_near_left"] = count_near(0, -big_m / 2);
    m.metrics["gamma2_near_right"] = count_near(1, big_m / 2);
    m.metrics["gamma1_near_right"] = count_near(0, big_m / 2);
    m.metrics["gamma2_near_left"] = count_near(1, -big_m / 2);

    write_stack(art(opts, m, "solution.stack"), sol.stack);
    write_boundaries_csv(art(opts, m, "boundaries.csv"), fb);
    write_boundaries_svg(art(opts, m, "boundaries.svg"), sol.stack, fb);
    return m;
}

// Solve on the unit disk carved out of [-1,1]^2 with the trace of `spec` held
// fixed outside the disk; returns sharp energies of the cone and the solution
// over the same cell mask.
struct DiskRun {
    double cone_energy = 0;
    double solved_energy = 0;
    SolveResult result;
};

DiskRun disk_solve(const ConeSpec& spec, int res, const SolveConfig& sc) {
    const Grid grid = Grid::make_2d(-1, 1, -1, 1, 2 * res, 2 * res);
    MembraneStack trace = sample_cone(spec, grid);
    trace.set_feasibility_tol(1e-9);
    const CellMask mask = disk_cells(grid, 0, 0, 1.0);
    const double band = 1.5 * grid.max_h();
    std::vector<char> free_nodes(grid.node_count(), 0);
    for (int iy = 0; iy < grid.nodes(1); ++iy)
        for (int ix = 0; ix < grid.nodes(0); ++ix)
            if (std::hypot(grid.node_x(ix), grid.node_y(iy)) < 1.0 - band)
                free_nodes[grid.node_index(ix, iy)] = 1;

    DiskRun run{0, 0, solve_masked(trace, free_nodes, mask, sc)};
    run.cone_energy = total_energy(trace, run.result.tau, mask).total;
    run.solved_energy = run.result.report.total;
    return run;
}

ExperimentManifest run_vs_instability(const ExperimentOptions& opts) {
    const int res = opts.resolution.value_or(
        int(opts.config.get_int("experiment.resolution", 128)));
    SolveConfig sc = solver_config(opts.config, opts, 2);
    ExperimentManifest m = start_manifest("vs-instability", opts, sc, res);
    m.metrics["h"] = 1.0 / res;

    const DiskRun vs = disk_solve(ConeSpec::vs(), res, sc);
    note_solver(m, vs.result, "vs_");
    m.metrics["energy_vs_cone"] = vs.cone_energy;
    m.metrics["energy_gap"] = vs.cone_energy - vs.solved_energy;

    const DiskRun v0 = disk_solve(ConeSpec::v0(), res, sc);
    note_solver(m, v0.result, "v0_");
    m.metrics["control_gap_v0"] = v0.cone_energy - v0.solved_energy;

    const DiskRun oned = disk_solve(ConeSpec::one_d(3, 1), res, sc);
    note_solver(m, oned.result, "oned_");
    m.metrics["control_gap_oned"] = oned.cone_energy - oned.solved_energy;

    write_stack(art(opts, m, "vs_solution.stack"), vs.result.stack);
    return m;
}

ExperimentManifest run_weiss(const ExperimentOptions& opts) {
    const int res = opts.resolution.value_or(
        int(opts.config.get_int("experiment.resolution", 256)));
    SolveConfig sc = solver_config(opts.config, opts, 1);
    ExperimentManifest m = start_manifest("weiss-monotonicity", opts, sc, res);
    m.metrics["h"] = 1.0 / res;

    const Grid grid = Grid::make_2d(-1, 1, -1, 1, 2 * res, 2 * res);
    std::vector<double> radii;
    for (double r = 0.2; r <= 0.901; r += 0.05) radii.push_back(r);

    const double tau = 1e-9;
    auto profile = [&](const ConeSpec& spec, const std::string& name) {
        MembraneStack stack = sample_cone(spec, grid);
        stack.set_feasibility_tol(1e-9);
        const WeissProfile wp = weiss_profile(stack, {0, 0}, radii, tau);
        m.metrics[name + "_min_increment"] = wp.min_increment;
        double lo = wp.phi[0], hi = wp.phi[0];
        for (double v : wp.phi) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        m.metrics[name + "_phi_mid"] = wp.phi[wp.phi.size() / 2];
        m.metrics[name + "_phi_spread"] = hi - lo;
        write_weiss_csv(art(opts, m, "weiss_" + name + ".csv"), wp);
    };
    profile(ConeSpec::v0(), "v0");
    profile(ConeSpec::vs(), "vs");
    m.metrics["phi_v0_exact"] = 5 * kPi / 6;
    return m;
}

ExperimentManifest run_spectrum(const ExperimentOptions& opts) {
    SolveConfig sc = solver_config(opts.config, opts, 1);
    ExperimentManifest m = start_manifest("spectrum-table", opts, sc, 0);
    write_spectrum_csv(art(opts, m, "spectrum.csv"), 9);
    const auto roots = eigen_roots(9);
    m.metrics["alpha0"] = alpha0();
    m.metrics["lambda_1"] = roots[0].lambda;
    m.metrics["multiplicity_1"] = roots[0].multiplicity;
    m.metrics["sqrt_lambda_3"] = roots[1].sqrt_lambda;
    m.metrics["sqrt_lambda_4"] = roots[2].sqrt_lambda;
    m.metrics["sqrt_lambda_5"] = roots[3].sqrt_lambda;
    return m;
}

}  // namespace

std::vector<std::string> experiment_ids() {
    return {"fig3-1d", "rectangle-junction", "vs-instability",
            "weiss-monotonicity", "spectrum-table"};
}

ExperimentManifest run_experiment(const std::string& id,
                                  const ExperimentOptions& opts) {
    opts.config.require_known(kKnownKeys);
    if (opts.out_dir.empty())
        throw std::invalid_argument("run_experiment: out_dir required");
    fs::create_directories(opts.out_dir);

    const auto t0 = std::chrono::steady_clock::now();
    ExperimentManifest m;
    if (id == "fig3-1d") m = run_fig3(opts);
    else if (id == "rectangle-junction") m = run_rectangle(opts);
    else if (id == "vs-instability") m = run_vs_instability(opts);
    else if (id == "weiss-monotonicity") m = run_weiss(opts);
    else if (id == "spectrum-table") m = run_spectrum(opts);
    else throw std::invalid_argument("unknown experiment id: " + id);

    m.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    m.write((fs::path(opts.out_dir) / "manifest.json").string());
    return m;
}

}  // namespace membrane
