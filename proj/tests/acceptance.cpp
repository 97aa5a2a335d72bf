// Acceptance gate: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <random>
#include <vector>

#include "membrane/analysis.hpp"
#include "membrane/boundary.hpp"
#include "membrane/cones.hpp"
#include "membrane/energy.hpp"
#include "membrane/experiments.hpp"
#include "membrane/harmonic.hpp"
#include "membrane/isotonic.hpp"
#include "membrane/solver.hpp"
#include "membrane/spectral.hpp"

using namespace membrane;

namespace {

constexpr double kPi = std::numbers::pi;

// Discretization slack constant for energy-gap comparisons, calibrated once
// against the V0 and U_{0,k} controls at h = 1/128 and then frozen.
constexpr double kSlackC = 2.0;

int g_failures = 0;

struct Criterion {
    const char* name;
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
    void finish(double seconds, double budget) {
        if (budget > 0 && seconds > budget) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + std::string("over time budget");
        }
        std::printf("%s %s (%.1f s)%s%s\n", ok ? "PASS" : "FAIL", name, seconds,
                    detail.empty() ? "" : " -- ", detail.c_str());
        if (!ok) ++g_failures;
    }
};

double now_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void criterion_1_explicit_minimizer() {
    Criterion c{"criterion-1 explicit-1d-minimizer"};
    const auto t0 = std::chrono::steady_clock::now();
    const double h = 1.0 / 512;
    const Grid g = Grid::make_1d(-1, 1, 1024);
    const BoundaryData bdata{ConeTrace{ConeSpec::triple_critical(), 0, 0}};
    const SolveResult res = solve(g, 3, bdata, std::nullopt, {});
    c.require(res.converged, "solver did not converge");

    double sup = 0;
    for (int p = 0; p < g.nodes(0); ++p) {
        const auto e = explicit_1d_minimizer(g.node_x(p));
        for (int i = 0; i < 3; ++i)
            sup = std::max(sup, std::fabs(res.stack.value(i, p) - e[i]));
    }
    c.require(sup <= 5 * h, "sup distance " + fmt(sup) + " > 5h");

    const FreeBoundarySet fb = extract_free_boundaries(res.stack, res.tau);
    const bool kinks_found = fb.gamma.size() == 2 && fb.gamma[0].size() == 1 &&
                             fb.gamma[1].size() == 1;
    c.require(kinks_found, "expected one branch point per pair");
    if (kinks_found) {
        const double k1 = fb.gamma[0][0].pts[0][0];
        const double k2 = fb.gamma[1][0].pts[0][0];
        c.require(std::fabs(k1 - explicit_kink_1()) <= 3 * h,
                  "kink1 " + fmt(k1) + " off by " + fmt(std::fabs(k1 - explicit_kink_1())));
        c.require(std::fabs(k2 - explicit_kink_2()) <= 3 * h,
                  "kink2 " + fmt(k2) + " off by " + fmt(std::fabs(k2 - explicit_kink_2())));
    }
    c.require(res.report.total >= 3.8637 - 10 * h && res.report.total <= 3.8637 + 10 * h,
              "energy " + fmt(res.report.total) + " outside 3.8637 +/- 10h");
    c.require(res.report.total < 4.0, "energy not below the critical 4");
    c.finish(now_since(t0), 10.0);
}

void criterion_2_spectral_exponent() {
    Criterion c{"criterion-2 spectral-exponent"};
    const auto t0 = std::chrono::steady_clock::now();
    // closed form (3/pi) acos((sqrt(17)-3)/8) - 1 = 0.3654948...; the quoted
    // 0.365575 carries a digit slip, checked at the precision it actually has
    const double a0 = alpha0();
    c.require(std::fabs(a0 - 0.3654948248550427) <= 1e-6, "alpha0 = " + fmt(a0));
    c.require(std::fabs(a0 - 0.365575) <= 1e-4, "alpha0 far from quoted digits");
    c.require(std::fabs(std::cos(kPi / 3 * (1 + a0)) - (std::sqrt(17.0) - 3) / 8) <= 1e-12,
              "cosine identity fails");
    const double lam4 = rayleigh_eigen(4, 512);
    c.require(std::fabs(lam4 - (1 + a0) * (1 + a0)) <= 1e-3,
              "rayleigh_eigen(4,512) = " + fmt(lam4));
    c.require(std::fabs(lam4 - 1.365575 * 1.365575) <= 1e-3,
              "rayleigh_eigen(4,512) vs quoted square");
    c.finish(now_since(t0), 5.0);
}

void criterion_3_cone_energies() {
    Criterion c{"criterion-3 cone-energies"};
    const auto t0 = std::chrono::steady_clock::now();
    const Grid g = Grid::make_2d(-1, 1, -1, 1, 512, 512);
    const CellMask mask = disk_cells(g, 0, 0, 1.0);
    const double v0 = potential_energy(sample_cone(ConeSpec::v0(), g), 1e-9, mask);
    c.require(std::fabs(v0 - 5 * kPi / 6) <= 0.02, "V0 potential = " + fmt(v0));
    const double oned = potential_energy(sample_cone(ConeSpec::one_d(3, 1), g), 1e-9, mask);
    c.require(std::fabs(oned - kPi / 2) <= 0.02, "1d cone potential = " + fmt(oned));
    c.finish(now_since(t0), 10.0);
}

void criterion_4_rectangle_junction() {
    Criterion c{"criterion-4 rectangle-junction"};
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentOptions opts;
    opts.out_dir = (std::filesystem::temp_directory_path() / "membrane_acceptance" /
                    "rectangle-junction").string();
    const ExperimentManifest m = run_experiment("rectangle-junction", opts);
    c.require(!m.flagged, "flagged: " + m.flag_reason);
    c.require(m.metrics.count("junction_count") && m.metrics.at("junction_count") >= 1,
              "no junction found");
    if (m.metrics.count("fit_residual")) {
        c.require(m.metrics.at("fit_residual") <= 0.05,
                  "fit residual " + fmt(m.metrics.at("fit_residual")));
        c.require(std::fabs(m.metrics.at("weiss_phi_r03") - 5 * kPi / 6) <= 0.15,
                  "weiss phi " + fmt(m.metrics.at("weiss_phi_r03")));
    }
    c.require(m.metrics.count("gamma1_near_left") &&
                  m.metrics.at("gamma1_near_left") == 0 &&
                  m.metrics.at("gamma2_near_right") == 0,
              "one-phase windows not clean");
    c.require(m.metrics.count("gamma1_near_right") &&
                  m.metrics.at("gamma1_near_right") > 0 &&
                  m.metrics.at("gamma2_near_left") > 0,
              "surviving free boundary missing near the ends");
    c.finish(now_since(t0), 600.0);
}

void criterion_5_vs_instability() {
    Criterion c{"criterion-5 vs-instability"};
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentOptions opts;
    opts.out_dir = (std::filesystem::temp_directory_path() / "membrane_acceptance" /
                    "vs-instability").string();
    const ExperimentManifest m = run_experiment("vs-instability", opts);
    const double h = m.metrics.at("h");
    const double gap = m.metrics.at("energy_gap");
    const double gv0 = m.metrics.at("control_gap_v0");
    const double god = m.metrics.at("control_gap_oned");
    c.require(gap > 3 * kSlackC * h,
              "vs gap " + fmt(gap) + " not above " + fmt(3 * kSlackC * h));
    c.require(std::fabs(gv0) <= kSlackC * h, "V0 control gap " + fmt(gv0));
    c.require(std::fabs(god) <= kSlackC * h, "1d control gap " + fmt(god));
    c.finish(now_since(t0), 0.0);
}

// ---- criterion 6: randomized property suites --------------------------------

std::vector<double> brute_force_project(const std::vector<double>& v) {
    const int n = int(v.size());
    std::vector<double> best;
    double best_d = 0;
    for (int cuts = 0; cuts < (1 << (n - 1)); ++cuts) {
        std::vector<double> cand(n);
        int start = 0;
        double prev = 0;
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) {
            if (!(i == n - 1 || (cuts >> i) & 1)) continue;
            double mean = 0;
            for (int j = start; j <= i; ++j) mean += v[j];
            mean /= (i - start + 1);
            if (start > 0 && mean > prev) ok = false;
            for (int j = start; j <= i; ++j) cand[j] = mean;
            prev = mean;
            start = i + 1;
        }
        if (!ok) continue;
        double d = 0;
        for (int j = 0; j < n; ++j) d += (cand[j] - v[j]) * (cand[j] - v[j]);
        if (best.empty() || d < best_d) {
            best = cand;
            best_d = d;
        }
    }
    return best;
}

MembraneStack random_feasible(std::mt19937_64& rng, const Grid& g, int n) {
    std::uniform_real_distribution<double> unif(0.0, 0.5);
    MembraneStack s(g, n, 1e-12);
    for (std::size_t p = 0; p < g.node_count(); ++p) {
        double level = double(n);
        for (int i = 0; i < n; ++i) {
            level -= unif(rng) + 1e-3;
            s.field(i)[p] = level;
        }
    }
    return s;
}

void suite_isotonic(Criterion& c, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    std::uniform_int_distribution<int> size(2, 5);
    int bad = 0;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> v(size(rng));
        for (double& x : v) x = unif(rng);
        const auto got = isotonic_project(v);
        const auto want = brute_force_project(v);
        for (std::size_t i = 0; i < v.size(); ++i)
            if (std::fabs(got[i] - want[i]) > 1e-10) ++bad;
    }
    c.require(bad == 0, "isotonic oracle mismatches: " + fmt(bad));
}

void suite_gradient(Criterion& c, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick(0, 1 << 20);
    int bad = 0, cases = 0;
    for (int trial = 0; trial < 10; ++trial) {
        const Grid g = trial % 2 ? Grid::make_1d(0, 1, 12)
                                 : Grid::make_2d(0, 1, 0, 1, 5, 4);
        MembraneStack s = random_feasible(rng, g, 3);
        const double delta = 0.05 + 0.1 * (trial % 3);
        const std::vector<char> free_nodes = interior_free_nodes(g);
        const auto grad = energy_gradient(s, delta, {}, free_nodes);
        for (int probe = 0; probe < 20; ++probe, ++cases) {
            const int i = pick(rng) % 3;
            const std::size_t p = pick(rng) % g.node_count();
            if (!free_nodes[p]) continue;
            const double eps = 1e-6, saved = s.field(i)[p];
            s.field(i)[p] = saved + eps;
            const double ep = smoothed_energy(s, delta);
            s.field(i)[p] = saved - eps;
            const double em = smoothed_energy(s, delta);
            s.field(i)[p] = saved;
            const double fd = (ep - em) / (2 * eps);
            if (std::fabs(grad[i][p] - fd) > 1e-5 * std::max(1.0, std::fabs(fd))) ++bad;
        }
    }
    c.require(cases >= 200 && bad == 0,
              "gradient mismatches: " + fmt(bad) + " of " + fmt(cases));
}

void suite_shift_invariance(Criterion& c, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> shift(-10.0, 10.0);
    const Grid g = Grid::make_2d(0, 1, 0, 1, 6, 6);
    int bad = 0;
    for (int trial = 0; trial < 200; ++trial) {
        MembraneStack s = random_feasible(rng, g, 3);
        const double w0 = potential_energy(s, 0.1);
        const double e0 = smoothed_energy(s, 0.2);
        const double off = shift(rng);
        for (int i = 0; i < 3; ++i)
            for (std::size_t p = 0; p < g.node_count(); ++p) s.field(i)[p] += off;
        if (std::fabs(potential_energy(s, 0.1) - w0) > 1e-12) ++bad;
        if (std::fabs(smoothed_energy(s, 0.2) - e0) > 1e-9 * std::max(1.0, e0)) ++bad;
    }
    c.require(bad == 0, "shift invariance violations: " + fmt(bad));
}

// 200 randomized small 1D solves; checks average harmonicity, one-sided
// comparison with harmonic replacement, Weiss monotonicity slack, and the
// slope-jump bound on every detected branch point.
void suite_solver_outputs(Criterion& c, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    int bad_avg = 0, bad_side = 0, bad_weiss = 0, bad_jump = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 3;
        const Grid g = Grid::make_1d(-1, 1, 64);
        const double h = g.h(0);

        // random ordered boundary data, zero on the left, spread on the right
        MembraneStack trace(g, n, 1e-9);
        double level = 0.8 + 0.4 * unif(rng);
        for (int i = 0; i < n; ++i) {
            for (int p = 0; p < g.nodes(0); ++p) trace.field(i)[p] = 0.0;
            trace.field(i)[g.nodes(0) - 1] = level;
            level -= unif(rng);
        }
        SolveConfig cfg;
        cfg.inner_tol = 1e-8;
        cfg.multi_start.count = 2;
        cfg.multi_start.seed = 1000 + trial;
        const SolveResult res =
            solve(g, n, BoundaryData{ExplicitTrace{trace}}, std::nullopt, cfg);
        if (!res.converged) continue;
        const std::vector<char> mask = interior_free_nodes(g);

        ScalarField avg(g);
        for (int p = 0; p < g.nodes(0); ++p) {
            double s = 0;
            for (int i = 0; i < n; ++i) s += res.stack.value(i, p);
            avg[p] = s / n;
        }
        const ScalarField avg_h = harmonic_replacement(avg, mask);
        for (int p = 0; p < g.nodes(0); ++p)
            if (std::fabs(avg[p] - avg_h[p]) > 1e-6) {
                ++bad_avg;
                break;
            }

        const ScalarField top_h = harmonic_replacement(res.stack.field(0), mask);
        const ScalarField bot_h = harmonic_replacement(res.stack.field(n - 1), mask);
        for (int p = 0; p < g.nodes(0); ++p)
            if (res.stack.value(0, p) > top_h[p] + 1e-8 ||
                res.stack.value(n - 1, p) < bot_h[p] - 1e-8) {
                ++bad_side;
                break;
            }

        const WeissProfile wp =
            weiss_profile(res.stack, {0.0, 0.0}, {0.3, 0.4, 0.5, 0.6}, res.tau);
        if (wp.min_increment < -kSlackC * h) ++bad_weiss;

        // slope-jump bound at each detected branch point
        const FreeBoundarySet fb = extract_free_boundaries(res.stack, res.tau);
        for (int pair = 0; pair < n - 1; ++pair) {
            for (const Polyline& line : fb.gamma[pair]) {
                const double x = line.pts[0][0];
                const int node = int(std::lround((x - g.lo(0)) / h));
                const int w = 6;
                if (node - w < 1 || node + w > g.nodes(0) - 2) continue;
                // top group: membranes coinciding with u_pair at the point,
                // above the opening gap
                int k_top = 1;
                for (int i = pair - 1; i >= 0; --i) {
                    if (std::fabs(res.stack.value(i, node) -
                                  res.stack.value(pair, node)) < 4 * h)
                        ++k_top;
                    else
                        break;
                }
                auto ls_slope = [&](int i, int lo) {
                    // least squares over w+1 nodes starting at lo
                    double sx = 0, sy = 0, sxx = 0, sxy = 0;
                    for (int q = lo; q <= lo + w; ++q) {
                        const double xx = g.node_x(q), yy = res.stack.value(i, q);
                        sx += xx; sy += yy; sxx += xx * xx; sxy += xx * yy;
                    }
                    const int m = w + 1;
                    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
                };
                const double jump = ls_slope(pair, node + 1) - ls_slope(pair, node - 1 - w);
                if (jump < -10 * h || jump > 1.0 / std::sqrt(double(k_top)) + 10 * h)
                    ++bad_jump;
            }
        }
    }
    c.require(bad_avg == 0, "average harmonicity failures: " + fmt(bad_avg));
    c.require(bad_side == 0, "sub/superharmonicity failures: " + fmt(bad_side));
    c.require(bad_weiss == 0, "weiss increment failures: " + fmt(bad_weiss));
    c.require(bad_jump == 0, "slope-jump failures: " + fmt(bad_jump));
}

void suite_equipartition(Criterion& c, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> res_pick(6, 9);
    int bad = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 4;
        const int k = 1 + trial % (n - 1);
        const int cells = 1 << res_pick(rng);
        const Grid g = Grid::make_1d(-1, 1, cells);
        const MembraneStack s = sample_cone(ConeSpec::one_d(n, k), g);
        if (equipartition_residual(s, 0.0, 16, 0.0) > 1e-10) ++bad;
    }
    c.require(bad == 0, "equipartition failures on closed forms: " + fmt(bad));
}

void criterion_6_property_suites() {
    Criterion c{"criterion-6 property-suites"};
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20240202);
    suite_isotonic(c, rng);
    suite_gradient(c, rng);
    suite_shift_invariance(c, rng);
    suite_solver_outputs(c, rng);
    suite_equipartition(c, rng);
    c.finish(now_since(t0), 0.0);
}

}  // namespace

int main() {
    criterion_1_explicit_minimizer();
    criterion_2_spectral_exponent();
    criterion_3_cone_energies();
    criterion_4_rectangle_junction();
    criterion_5_vs_instability();
    criterion_6_property_suites();
    if (g_failures) std::printf("%d criterion(s) failed\n", g_failures);
    else std::printf("all criteria passed\n");
    return g_failures == 0 ? 0 : 1;
}
