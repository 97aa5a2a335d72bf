#include "membrane/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <cstdio>
#include <cstdlib>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "membrane/harmonic.hpp"
#include "membrane/isotonic.hpp"
#include "membrane/reduce.hpp"

namespace membrane {

double max_slope(const MembraneStack& stack) {
    const Grid& g = stack.grid();
    double worst = 0.0;
    const int nx = g.nodes(0);
    const int ny = g.dim() == 2 ? g.nodes(1) : 1;
    for (int i = 0; i < stack.n_membranes(); ++i) {
        const auto& u = stack.field(i).data();
        for (int iy = 0; iy < ny; ++iy)
            for (int ix = 0; ix < nx; ++ix) {
                const std::size_t p = g.node_index(ix, iy);
                if (ix + 1 < nx)
                    worst = std::max(worst, std::fabs(u[p + 1] - u[p]) / g.h(0));
                if (g.dim() == 2 && iy + 1 < ny)
                    worst = std::max(worst, std::fabs(u[p + nx] - u[p]) / g.h(1));
            }
    }
    return worst;
}

namespace {

void project_nodes(MembraneStack& stack, const std::vector<char>& free_nodes) {
    const int n = stack.n_membranes();
    const std::size_t nodes = stack.grid().node_count();
    parallel_for(nodes, [&](std::size_t p) {
        if (!free_nodes[p]) return;
        double buf[8];
        std::vector<double> heap;
        double* v = buf;
        if (n > 8) {
            heap.resize(n);
            v = heap.data();
        }
        for (int i = 0; i < n; ++i) v[i] = stack.field(i)[p];
        isotonic_project_inplace(std::span<double>(v, std::size_t(n)));
        for (int i = 0; i < n; ++i) stack.field(i)[p] = v[i];
    });
}

double grad_sup(const std::vector<std::vector<double>>& g) {
    double worst = 0;
    for (const auto& gi : g)
        for (double v : gi) worst = std::max(worst, std::fabs(v));
    return worst;
}

double grad_norm2(const std::vector<std::vector<double>>& g) {
    double acc = 0;
    for (const auto& gi : g)
        for (double v : gi) acc += v * v;
    return acc;
}

// x <- proj(y - t*g) on free nodes; fixed nodes copied from y.
void step_and_project(const MembraneStack& y,
                      const std::vector<std::vector<double>>& g, double t,
                      const std::vector<char>& free_nodes, MembraneStack& out) {
    const int n = y.n_membranes();
    for (int i = 0; i < n; ++i) {
        const auto& yi = y.field(i).data();
        const auto& gi = g[i];
        auto& oi = out.field(i).data();
        parallel_for(yi.size(), [&](std::size_t p) {
            oi[p] = free_nodes[p] ? yi[p] - t * gi[p] : yi[p];
        });
    }
    project_nodes(out, free_nodes);
}

double diff_norm2(const MembraneStack& a, const MembraneStack& b) {
    double acc = 0;
    for (int i = 0; i < a.n_membranes(); ++i) {
        const auto& ai = a.field(i).data();
        const auto& bi = b.field(i).data();
        for (std::size_t p = 0; p < ai.size(); ++p) {
            const double d = ai[p] - bi[p];
            acc += d * d;
        }
    }
    return acc;
}

double diff_sup(const MembraneStack& a, const MembraneStack& b) {
    double acc = 0;
    for (int i = 0; i < a.n_membranes(); ++i) {
        const auto& ai = a.field(i).data();
        const auto& bi = b.field(i).data();
        for (std::size_t p = 0; p < ai.size(); ++p)
            acc = std::max(acc, std::fabs(ai[p] - bi[p]));
    }
    return acc;
}

struct PhaseResult {
    int iterations = 0;
    bool converged = false;
};

// Projected descent at fixed delta: Armijo-backtracked gradient steps with
// Nesterov-style extrapolation and a monotone safeguard, so the recorded
// energy never increases within the phase.
PhaseResult run_phase(MembraneStack& x, double delta,
                      const std::vector<char>& free_nodes,
                      const CellMask& cells, const SolveConfig& cfg,
                      double& t, std::vector<double>& trace) {
    PhaseResult out;
    MembraneStack x_prev = x;
    MembraneStack y = x;
    MembraneStack cand = x;
    std::vector<std::vector<double>> g;
    double ex = smoothed_energy(x, delta, cells);
    double theta = 1.0;
    const double t_floor = t * 1e-8;

    for (int it = 0; it < cfg.max_outer; ++it) {
        // extrapolation point
        const double theta_next = 0.5 * (1 + std::sqrt(1 + 4 * theta * theta));
        const double beta = cfg.accelerate ? (theta - 1) / theta_next : 0.0;
        theta = theta_next;
        for (int i = 0; i < x.n_membranes(); ++i) {
            const auto& xi = x.field(i).data();
            const auto& pi = x_prev.field(i).data();
            auto& yi = y.field(i).data();
            parallel_for(xi.size(), [&](std::size_t p) {
                yi[p] = free_nodes[p] ? xi[p] + beta * (xi[p] - pi[p]) : xi[p];
            });
        }
        project_nodes(y, free_nodes);

        energy_gradient_into(y, delta, cells, free_nodes, g);
        const double ey = smoothed_energy(y, delta, cells);

        bool accepted = false;
        double ec = 0;
        while (t > t_floor) {
            step_and_project(y, g, t, free_nodes, cand);
            ec = smoothed_energy(cand, delta, cells);
            const double dn = diff_norm2(cand, y);
            if (ec <= ey - cfg.armijo * dn / std::max(t, 1e-300)) {
                accepted = true;
                break;
            }
            t *= cfg.backtrack;
        }

        if (!accepted || ec > ex + 1e-12) {
            // momentum overshoot: plain projected step from x
            theta = 1.0;
            energy_gradient_into(x, delta, cells, free_nodes, g);
            accepted = false;
            while (t > t_floor) {
                step_and_project(x, g, t, free_nodes, cand);
                ec = smoothed_energy(cand, delta, cells);
                const double dn = diff_norm2(cand, x);
                if (ec <= ex - cfg.armijo * dn / std::max(t, 1e-300)) {
                    accepted = true;
                    break;
                }
                t *= cfg.backtrack;
            }
            if (!accepted) {
                // no descent direction at this resolution of t; stationary
                out.converged = true;
                out.iterations = it;
                return out;
            }
            const double pg = diff_sup(cand, x) / t;
            x_prev = x;
            x = cand;
            ex = ec;
            trace.push_back(ex);
            ++out.iterations;
            if (std::getenv("MEMBRANE_DEBUG") && it % 500 == 499)
                std::fprintf(stderr, "  [fb] it=%d delta=%g t=%g pg=%g e=%.12f\n", it, delta, t, pg, ex);
            if (pg <= cfg.inner_tol) {
                out.converged = true;
                return out;
            }
            continue;
        }

        x_prev = x;
        x = cand;
        ex = ec;
        trace.push_back(ex);
        ++out.iterations;
        t *= 1.25;  // let the step recover after backtracks

        if (it % 10 == 9) {
            energy_gradient_into(x, delta, cells, free_nodes, g);
            step_and_project(x, g, t, free_nodes, cand);
            const double pg = diff_sup(cand, x) / t;
            if (std::getenv("MEMBRANE_DEBUG") && it % 500 == 499)
                std::fprintf(stderr, "  it=%d delta=%g t=%g pg=%g e=%.12f\n", it, delta, t, pg, ex);
            if (pg <= cfg.inner_tol) {
                out.converged = true;
                return out;
            }
        }
    }
    return out;
}

// Stiffness form of the Dirichlet energy: D(u) = u^T A u per membrane, rows
// kept only for free nodes. fb holds couplings from free rows to fixed nodes.
struct DirichletOperator {
    std::vector<int> dof;               // node -> dof index, -1 if fixed
    std::vector<std::size_t> node_of;   // dof -> node
    Eigen::SparseMatrix<double> a_ff;
    struct Coupling { int row; std::size_t node; double w; };
    std::vector<Coupling> fb;

    void build(const Grid& g, const CellMask& mask,
               const std::vector<char>& free_nodes) {
        dof.assign(g.node_count(), -1);
        node_of.clear();
        for (std::size_t p = 0; p < g.node_count(); ++p)
            if (free_nodes[p]) {
                dof[p] = int(node_of.size());
                node_of.push_back(p);
            }
        std::vector<Eigen::Triplet<double>> trip;
        fb.clear();
        auto add_edge = [&](std::size_t p, std::size_t q, double w) {
            // contributes w*(u_p - u_q)^2 to D
            for (int pass = 0; pass < 2; ++pass) {
                const std::size_t r = pass == 0 ? p : q;
                const std::size_t c = pass == 0 ? q : p;
                if (dof[r] < 0) continue;
                trip.emplace_back(dof[r], dof[r], w);
                if (dof[c] >= 0)
                    trip.emplace_back(dof[r], dof[c], -w);
                else
                    fb.push_back({dof[r], c, -w});
            }
        };
        const double vol = g.cell_volume();
        if (g.dim() == 1) {
            const double w = vol / (g.h(0) * g.h(0));
            for (int c = 0; c < g.cells(0); ++c) {
                if (!mask.empty() && !mask[c]) continue;
                add_edge(c, c + 1, w);
            }
        } else {
            const double wx = 0.5 * vol / (g.h(0) * g.h(0));
            const double wy = 0.5 * vol / (g.h(1) * g.h(1));
            for (int cy = 0; cy < g.cells(1); ++cy)
                for (int cx = 0; cx < g.cells(0); ++cx) {
                    if (!mask.empty() && !mask[std::size_t(cy) * g.cells(0) + cx])
                        continue;
                    const std::size_t p00 = g.node_index(cx, cy);
                    const std::size_t p10 = g.node_index(cx + 1, cy);
                    const std::size_t p01 = g.node_index(cx, cy + 1);
                    const std::size_t p11 = g.node_index(cx + 1, cy + 1);
                    add_edge(p00, p10, wx);
                    add_edge(p01, p11, wx);
                    add_edge(p00, p01, wy);
                    add_edge(p10, p11, wy);
                }
        }
        a_ff.resize(int(node_of.size()), int(node_of.size()));
        a_ff.setFromTriplets(trip.begin(), trip.end());
    }
};

// Half step on the potential, implicit step on the Dirichlet part:
// (I + 2 t A) z = x - t grad_P(x), then order projection and a monotone line
// search along z - x. The implicit step is unconditionally stable, so t can
// be of domain scale; this phase supplies the warm start and the explicit
// phase at the smoothing floor certifies stationarity.
int run_implicit_phase(MembraneStack& x, double delta,
                       const std::vector<char>& free_nodes,
                       const CellMask& cells, const DirichletOperator& op,
                       const Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>& fact,
                       double t, int budget, std::vector<double>& trace) {
    const int n = x.n_membranes();
    const std::size_t m = op.node_of.size();
    MembraneStack cand = x;
    std::vector<std::vector<double>> gp;
    double ex = smoothed_energy(x, delta, cells);

    // boundary couplings are constant: bc_i = 2 t A_fb x_b
    std::vector<Eigen::VectorXd> bc(n, Eigen::VectorXd::Zero(m));
    for (int i = 0; i < n; ++i)
        for (const auto& c : op.fb) bc[i][c.row] += 2 * t * c.w * x.field(i)[c.node];

    int iters = 0;
    Eigen::VectorXd b(m), z(m);
    for (int it = 0; it < budget; ++it) {
        potential_gradient_into(x, delta, cells, free_nodes, gp);
        for (int i = 0; i < n; ++i) {
            const auto& xi = x.field(i).data();
            for (std::size_t d = 0; d < m; ++d) {
                const std::size_t p = op.node_of[d];
                b[d] = xi[p] - t * gp[i][p] - bc[i][d];
            }
            z = fact.solve(b);
            auto& ci = cand.field(i).data();
            ci = xi;
            for (std::size_t d = 0; d < m; ++d) ci[op.node_of[d]] = z[d];
        }
        project_nodes(cand, free_nodes);

        // backtracking along the feasible segment x + alpha (cand - x)
        double alpha = 1.0;
        bool accepted = false;
        MembraneStack trial = x;
        double et = 0;
        while (alpha >= 1.0 / 1024) {
            for (int i = 0; i < n; ++i) {
                const auto& xi = x.field(i).data();
                const auto& ci = cand.field(i).data();
                auto& ti = trial.field(i).data();
                for (std::size_t p = 0; p < xi.size(); ++p)
                    ti[p] = xi[p] + alpha * (ci[p] - xi[p]);
            }
            et = smoothed_energy(trial, delta, cells);
            if (et <= ex - 1e-14 * (1 + std::fabs(ex))) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) break;
        const double move = diff_sup(trial, x);
        x = trial;
        ex = et;
        trace.push_back(ex);
        ++iters;
        if (move <= 1e-10) break;
    }
    return iters;
}

double boundary_oscillation(const MembraneStack& init,
                            const std::vector<char>& free_nodes) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int i = 0; i < init.n_membranes(); ++i) {
        const auto& u = init.field(i).data();
        for (std::size_t p = 0; p < u.size(); ++p) {
            if (free_nodes[p]) continue;
            lo = std::min(lo, u[p]);
            hi = std::max(hi, u[p]);
        }
    }
    return hi > lo ? hi - lo : 0.0;
}

}  // namespace

SolveResult solve_masked(const MembraneStack& init,
                         const std::vector<char>& free_nodes,
                         const CellMask& cell_mask, const SolveConfig& cfg_in) {
    SolveConfig cfg = cfg_in;
    const Grid& g = init.grid();

    double slope = max_slope(init);
    if (slope <= 0) slope = 1.0;
    const double h = g.max_h();
    SmoothingSchedule sched;
    if (cfg.schedule) {
        sched = *cfg.schedule;
    } else {
        sched.delta_min = 2 * slope * h;
        sched.delta0 = std::max(8 * sched.delta_min,
                                0.25 * boundary_oscillation(init, free_nodes));
        if (sched.delta0 <= sched.delta_min) sched.delta0 = sched.delta_min * 1.0000001;
        sched.ratio = 0.5;
    }
    const double tau = cfg.tau >= 0 ? cfg.tau : sched.delta_min / 2;

    double step0 = cfg.step0;
    if (step0 <= 0) {
        double l_est = 0;
        for (int a = 0; a < g.dim(); ++a)
            l_est += 8 * g.cell_volume() / (g.h(a) * g.h(a));
        step0 = 1.0 / l_est;
    }

    const double osc = boundary_oscillation(init, free_nodes);
    std::mt19937_64 rng(cfg.multi_start.seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);

    std::optional<SolveResult> best;
    const int runs = std::max(1, cfg.multi_start.count);
    for (int run = 0; run < runs; ++run) {
        MembraneStack x = init;
        if (run > 0) {
            const double amp = cfg.multi_start.amplitude_factor * osc;
            for (int i = 0; i < x.n_membranes(); ++i)
                for (std::size_t p = 0; p < x.field(i).size(); ++p)
                    if (free_nodes[p]) x.field(i)[p] += amp * unif(rng);
        }
        project_nodes(x, free_nodes);
        x.set_feasibility_tol(1e-9);

        SolveResult res{x, {}, 0, true, {}, {}, sched.delta_min, tau, run};
        double t = step0;
        const auto levels = sched.levels();
        for (std::size_t lvl = 0; lvl < levels.size(); ++lvl) {
            // intermediate levels only anneal toward the sharp problem; the
            // stationarity tolerance is enforced at the smoothing floor
            const bool final_level = lvl + 1 == levels.size();
            SolveConfig level_cfg = cfg;
            if (!final_level)
                level_cfg.max_outer = std::max(100, cfg.max_outer / 10);
            res.phase_starts.push_back(res.trace.size());
            const PhaseResult ph = run_phase(res.stack, levels[lvl], free_nodes,
                                             cell_mask, level_cfg, t, res.trace);
            res.iterations += ph.iterations;
            if (final_level) res.converged = ph.converged;
            t = std::max(t, step0 * 0.01);
        }
        res.report = total_energy(res.stack, tau, cell_mask);
        if (!best || res.report.total < best->report.total - 1e-15)
            best = std::move(res);
    }
    return *best;
}

SolveResult solve(const Grid& grid, int n_membranes, const BoundaryData& boundary,
                  const std::optional<MembraneStack>& init_opt,
                  const SolveConfig& cfg) {
    const std::vector<char> free_nodes = interior_free_nodes(grid);

    MembraneStack init = init_opt ? *init_opt : MembraneStack(grid, n_membranes);
    if (init_opt && !init_opt->is_ordered())
        throw std::invalid_argument("solve: infeasible initial stack");
    apply_boundary(init, boundary);

    // degenerate data: all membranes equal on the boundary -> shared harmonic
    // extension, energy has no potential part
    bool degenerate = true;
    const int nx = grid.nodes(0);
    const int ny = grid.dim() == 2 ? grid.nodes(1) : 1;
    for (int iy = 0; iy < ny && degenerate; ++iy)
        for (int ix = 0; ix < nx && degenerate; ++ix) {
            if (!grid.is_boundary_node(ix, iy)) continue;
            const std::size_t p = grid.node_index(ix, iy);
            for (int i = 1; i < n_membranes; ++i)
                if (init.value(i, p) != init.value(0, p)) {
                    degenerate = false;
                    break;
                }
        }

    if (!init_opt || degenerate) {
        init = harmonic_replacement(init, free_nodes);
        project_nodes(init, free_nodes);
    }

    if (degenerate) {
        SolveResult res{init, {}, 0, true, {}, {}, 0.0, 0.0, 0};
        const double h = grid.max_h();
        res.tau = cfg.tau >= 0 ? cfg.tau : max_slope(init) * h;
        res.report = total_energy(init, res.tau);
        return res;
    }

    return solve_masked(init, free_nodes, {}, cfg);
}

}  // namespace membrane
