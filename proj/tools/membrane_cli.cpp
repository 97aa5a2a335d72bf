#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <numbers>
#include <optional>

#include "membrane/analysis.hpp"
#include "membrane/boundary.hpp"
#include "membrane/cones.hpp"
#include "membrane/experiments.hpp"
#include "membrane/io.hpp"
#include "membrane/solver.hpp"
#include "membrane/spectral.hpp"

namespace fs = std::filesystem;
using namespace membrane;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = "runs";
    std::optional<std::uint64_t> seed;
    std::optional<int> resolution;

    Config load_config() const {
        return config_path.empty() ? Config{} : Config::parse_file(config_path);
    }
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "key-value config file");
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--seed", opts.seed, "multi-start RNG seed");
    cmd->add_option("--resolution", opts.resolution, "cells per unit length");
}

int cmd_solve(const CommonOpts& opts, const std::string& cone_text, int dim) {
    const int res = opts.resolution.value_or(dim == 1 ? 512 : 64);
    const ConeSpec spec = ConeSpec::parse(cone_text);
    const Grid grid = dim == 1 ? Grid::make_1d(-1, 1, 2 * res)
                               : Grid::make_2d(-1, 1, -1, 1, 2 * res, 2 * res);

    ExperimentOptions eopts{opts.out_dir, opts.seed, opts.resolution,
                            opts.load_config()};
    SolveConfig sc;
    sc.max_outer = int(eopts.config.get_int("solver.max_outer", sc.max_outer));
    sc.inner_tol = eopts.config.get_double("solver.inner_tol", sc.inner_tol);
    sc.tau = eopts.config.get_double("solver.tau", sc.tau);
    sc.multi_start.count = int(eopts.config.get_int("solver.runs", 4));
    if (opts.seed) sc.multi_start.seed = *opts.seed;

    const BoundaryData bdata{ConeTrace{spec, 0, 0}};
    const SolveResult sol = solve(grid, spec.membranes(), bdata, std::nullopt, sc);

    fs::create_directories(opts.out_dir);
    write_stack((fs::path(opts.out_dir) / "solution.stack").string(), sol.stack);
    const FreeBoundarySet fb = extract_free_boundaries(sol.stack, sol.tau);
    write_boundaries_csv((fs::path(opts.out_dir) / "boundaries.csv").string(), fb);
    if (dim == 2)
        write_boundaries_svg((fs::path(opts.out_dir) / "boundaries.svg").string(),
                             sol.stack, fb);

    std::printf("boundary:   %s\n", spec.to_string().c_str());
    std::printf("dirichlet:  %.9g\n", sol.report.dirichlet);
    std::printf("potential:  %.9g\n", sol.report.potential);
    std::printf("total:      %.9g\n", sol.report.total);
    std::printf("iterations: %d  converged: %s\n", sol.iterations,
                sol.converged ? "yes" : "no");
    return sol.converged ? 0 : 2;
}

int cmd_weiss(const CommonOpts& opts, const std::string& stack_path, double cx,
              double cy, double r0, double r1, int steps) {
    const MembraneStack stack = read_stack(stack_path);
    std::vector<double> radii;
    for (int i = 0; i < steps; ++i)
        radii.push_back(r0 + (r1 - r0) * i / double(steps - 1));
    const WeissProfile wp = weiss_profile(stack, {cx, cy}, radii);
    fs::create_directories(opts.out_dir);
    write_weiss_csv((fs::path(opts.out_dir) / "weiss.csv").string(), wp);
    std::printf("phi(%g) = %.9g   phi(%g) = %.9g   min_increment = %.3g\n",
                radii.front(), wp.phi.front(), radii.back(), wp.phi.back(),
                wp.min_increment);
    return 0;
}

int cmd_spectrum(const CommonOpts& opts, int count) {
    fs::create_directories(opts.out_dir);
    const std::string path = (fs::path(opts.out_dir) / "spectrum.csv").string();
    write_spectrum_csv(path, count);
    for (const SpectrumRow& r : spectrum_table(count))
        std::printf("%2d  t=%-12.9g sqrt_lambda=%-12.9g lambda=%-12.9g %s mult=%d\n",
                    r.k, r.t, r.sqrt_lambda, r.lambda,
                    r.branch == QuadraticBranch::Plus ? "plus " : "minus",
                    r.multiplicity);
    std::printf("alpha0 = %.9g\nwrote %s\n", alpha0(), path.c_str());
    return 0;
}

int cmd_cones(const CommonOpts& opts, const std::string& spec_text) {
    if (spec_text.empty()) {
        const char* catalog[] = {"oned N=3 k=1", "oned N=3 k=2", "v0 rot=0",
                                 "vs rot=0", "triple"};
        std::printf("%-24s %s\n", "cone", "potential over the unit ball");
        for (const char* c : catalog)
            std::printf("%-24s %.9g\n", c, cone_energy(ConeSpec::parse(c)));
        return 0;
    }
    const ConeSpec spec = ConeSpec::parse(spec_text);
    const int res = opts.resolution.value_or(64);
    const Grid grid = spec.min_dim() == 1 && !opts.resolution
                          ? Grid::make_1d(-1, 1, 2 * 512)
                          : (spec.min_dim() == 1
                                 ? Grid::make_1d(-1, 1, 2 * res)
                                 : Grid::make_2d(-1, 1, -1, 1, 2 * res, 2 * res));
    fs::create_directories(opts.out_dir);
    const std::string path = (fs::path(opts.out_dir) / "cone.stack").string();
    write_stack(path, sample_cone(spec, grid));
    std::printf("sampled %s -> %s\n", spec.to_string().c_str(), path.c_str());
    if (spec.variant != ConeVariant::Explicit1D)
        std::printf("potential over the unit ball: %.9g\n", cone_energy(spec));
    return 0;
}

int cmd_experiment(const CommonOpts& opts, const std::string& id) {
    ExperimentOptions eopts{opts.out_dir, opts.seed, opts.resolution,
                            opts.load_config()};
    if (eopts.out_dir == "runs") eopts.out_dir = (fs::path("runs") / id).string();
    const ExperimentManifest m = run_experiment(id, eopts);
    for (const auto& [key, value] : m.metrics)
        std::printf("%-28s %.9g\n", key.c_str(), value);
    std::printf("manifest: %s\n",
                (fs::path(eopts.out_dir) / "manifest.json").string().c_str());
    if (m.flagged) {
        std::printf("FLAGGED: %s\n", m.flag_reason.c_str());
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for ordered elastic membranes"};
    app.require_subcommand(1);
    CommonOpts opts;

    auto* solve_cmd = app.add_subcommand("solve", "minimize with a cone trace");
    std::string cone_text = "triple";
    int dim = 1;
    solve_cmd->add_option("--cone", cone_text, "boundary cone, e.g. 'oned N=3 k=1'");
    solve_cmd->add_option("--dim", dim, "1 or 2")->check(CLI::Range(1, 2));
    add_common(solve_cmd, opts);

    auto* weiss_cmd = app.add_subcommand("weiss", "scaling profile of a stored stack");
    std::string stack_path;
    double cx = 0, cy = 0, r0 = 0.2, r1 = 0.8;
    int steps = 13;
    weiss_cmd->add_option("--stack", stack_path, "stack file")->required();
    weiss_cmd->add_option("--cx", cx, "center x");
    weiss_cmd->add_option("--cy", cy, "center y");
    weiss_cmd->add_option("--r0", r0, "smallest radius");
    weiss_cmd->add_option("--r1", r1, "largest radius");
    weiss_cmd->add_option("--steps", steps, "number of radii");
    add_common(weiss_cmd, opts);

    auto* spectrum_cmd = app.add_subcommand("spectrum", "angular eigenvalue table");
    int count = 9;
    spectrum_cmd->add_option("--count", count, "number of roots");
    add_common(spectrum_cmd, opts);

    auto* cones_cmd = app.add_subcommand("cones", "closed-form cone catalog");
    std::string spec_text;
    cones_cmd->add_option("--spec", spec_text, "sample this cone to a stack file");
    add_common(cones_cmd, opts);

    auto* exp_cmd = app.add_subcommand("experiment", "run a named experiment");
    std::string experiment_id;
    exp_cmd->add_option("id", experiment_id, "experiment id")->required();
    add_common(exp_cmd, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve_cmd->parsed()) return cmd_solve(opts, cone_text, dim);
        if (weiss_cmd->parsed())
            return cmd_weiss(opts, stack_path, cx, cy, r0, r1, steps);
        if (spectrum_cmd->parsed()) return cmd_spectrum(opts, count);
        if (cones_cmd->parsed()) return cmd_cones(opts, spec_text);
        if (exp_cmd->parsed()) return cmd_experiment(opts, experiment_id);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
