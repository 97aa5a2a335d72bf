#include "membrane/energy.hpp"

#include <cmath>
#include <stdexcept>

#include "membrane/reduce.hpp"

namespace membrane {

CellMask all_cells(const Grid& grid) {
    return CellMask(grid.cell_count(), 1);
}

CellMask disk_cells(const Grid& grid, double cx, double cy, double radius) {
    CellMask mask(grid.cell_count(), 0);
    if (grid.dim() == 1) {
        for (int c = 0; c < grid.cells(0); ++c)
            mask[c] = std::fabs(grid.cell_center_x(c) - cx) < radius;
        return mask;
    }
    for (int j = 0; j < grid.cells(1); ++j)
        for (int i = 0; i < grid.cells(0); ++i) {
            const double dx = grid.cell_center_x(i) - cx;
            const double dy = grid.cell_center_y(j) - cy;
            mask[std::size_t(j) * grid.cells(0) + i] = dx * dx + dy * dy < radius * radius;
        }
    return mask;
}

std::vector<double> SmoothingSchedule::levels() const {
    if (!(delta0 > 0) || !(delta_min > 0) || !(ratio > 0) || !(ratio < 1))
        throw std::invalid_argument("SmoothingSchedule: need delta0, delta_min > 0 and ratio in (0,1)");
    if (delta_min > delta0)
        throw std::invalid_argument("SmoothingSchedule: delta_min > delta0");
    std::vector<double> out;
    double d = delta0;
    while (d > delta_min) {
        out.push_back(d);
        d *= ratio;
    }
    out.push_back(delta_min);
    return out;
}

double smoothstep_ramp(double t, double delta) {
    if (t <= 0) return 0.0;
    if (t >= delta) return 1.0;
    const double s = t / delta;
    return s * s * (3 - 2 * s);
}

double smoothstep_ramp_deriv(double t, double delta) {
    if (t <= 0 || t >= delta) return 0.0;
    const double s = t / delta;
    return 6 * s * (1 - s) / delta;
}

namespace {

struct CellGeom {
    const Grid& g;
    int ncx;  // cells along x
    double hx, hy, vol;
    explicit CellGeom(const Grid& grid)
        : g(grid), ncx(grid.cells(0)), hx(grid.h(0)),
          hy(grid.dim() == 2 ? grid.h(1) : 0.0), vol(grid.cell_volume()) {}
};

// Dirichlet density of one cell (all membranes), exact for affine fields.
inline double cell_dirichlet(const MembraneStack& stack, const CellGeom& geo,
                             std::size_t cell) {
    const Grid& g = geo.g;
    const int n = stack.n_membranes();
    double acc = 0.0;
    if (g.dim() == 1) {
        const std::size_t p0 = cell, p1 = cell + 1;
        for (int i = 0; i < n; ++i) {
            const double s = (stack.value(i, p1) - stack.value(i, p0)) / geo.hx;
            acc += s * s;
        }
        return geo.vol * acc;
    }
    const int cx = int(cell % geo.ncx), cy = int(cell / geo.ncx);
    const std::size_t p00 = g.node_index(cx, cy), p10 = p00 + 1;
    const std::size_t p01 = g.node_index(cx, cy + 1), p11 = p01 + 1;
    for (int i = 0; i < n; ++i) {
        const auto& u = stack.field(i).data();
        const double sx0 = (u[p10] - u[p00]) / geo.hx;
        const double sx1 = (u[p11] - u[p01]) / geo.hx;
        const double sy0 = (u[p01] - u[p00]) / geo.hy;
        const double sy1 = (u[p11] - u[p10]) / geo.hy;
        acc += 0.5 * (sx0 * sx0 + sx1 * sx1) + 0.5 * (sy0 * sy0 + sy1 * sy1);
    }
    return geo.vol * acc;
}

// Cell-center gap of consecutive pair i (mean of corner gaps).
inline double cell_gap(const MembraneStack& stack, const CellGeom& geo,
                       std::size_t cell, int i) {
    const Grid& g = geo.g;
    const auto& a = stack.field(i).data();
    const auto& b = stack.field(i + 1).data();
    if (g.dim() == 1)
        return 0.5 * ((a[cell] - b[cell]) + (a[cell + 1] - b[cell + 1]));
    const int cx = int(cell % geo.ncx), cy = int(cell / geo.ncx);
    const std::size_t p00 = g.node_index(cx, cy), p10 = p00 + 1;
    const std::size_t p01 = g.node_index(cx, cy + 1), p11 = p01 + 1;
    return 0.25 * ((a[p00] - b[p00]) + (a[p10] - b[p10]) + (a[p01] - b[p01]) +
                   (a[p11] - b[p11]));
}

inline double cell_potential(const MembraneStack& stack, const CellGeom& geo,
                             std::size_t cell, double tau) {
    int count = 0;
    for (int i = 0; i + 1 < stack.n_membranes(); ++i)
        if (cell_gap(stack, geo, cell, i) > tau) ++count;
    return geo.vol * count;
}

inline double cell_smoothed(const MembraneStack& stack, const CellGeom& geo,
                            std::size_t cell, double delta) {
    double acc = 0.0;
    for (int i = 0; i + 1 < stack.n_membranes(); ++i)
        acc += smoothstep_ramp(cell_gap(stack, geo, cell, i), delta);
    return geo.vol * acc;
}

}  // namespace

double dirichlet_energy(const MembraneStack& stack, const CellMask& mask) {
    const CellGeom geo(stack.grid());
    return deterministic_sum(stack.grid().cell_count(), [&](std::size_t c) {
        if (!mask.empty() && !mask[c]) return 0.0;
        return cell_dirichlet(stack, geo, c);
    });
}

double potential_energy(const MembraneStack& stack, double tau,
                        const CellMask& mask) {
    if (tau < 0) throw std::invalid_argument("potential_energy: tau < 0");
    const CellGeom geo(stack.grid());
    return deterministic_sum(stack.grid().cell_count(), [&](std::size_t c) {
        if (!mask.empty() && !mask[c]) return 0.0;
        return cell_potential(stack, geo, c, tau);
    });
}

double smoothed_potential(const MembraneStack& stack, double delta,
                          const CellMask& mask) {
    if (!(delta > 0)) throw std::invalid_argument("smoothed_potential: delta <= 0");
    const CellGeom geo(stack.grid());
    return deterministic_sum(stack.grid().cell_count(), [&](std::size_t c) {
        if (!mask.empty() && !mask[c]) return 0.0;
        return cell_smoothed(stack, geo, c, delta);
    });
}

double smoothed_energy(const MembraneStack& stack, double delta,
                       const CellMask& mask) {
    if (!(delta > 0)) throw std::invalid_argument("smoothed_energy: delta <= 0");
    const CellGeom geo(stack.grid());
    return deterministic_sum(stack.grid().cell_count(), [&](std::size_t c) {
        if (!mask.empty() && !mask[c]) return 0.0;
        return cell_dirichlet(stack, geo, c) + cell_smoothed(stack, geo, c, delta);
    });
}

EnergyReport total_energy(const MembraneStack& stack, double tau,
                          const CellMask& mask, bool per_cell) {
    EnergyReport rep;
    rep.tau = tau;
    rep.dirichlet = dirichlet_energy(stack, mask);
    rep.potential = potential_energy(stack, tau, mask);
    rep.total = rep.dirichlet + rep.potential;
    if (per_cell) {
        const CellGeom geo(stack.grid());
        std::vector<double> dens(stack.grid().cell_count(), 0.0);
        parallel_for(dens.size(), [&](std::size_t c) {
            if (!mask.empty() && !mask[c]) return;
            dens[c] = (cell_dirichlet(stack, geo, c) +
                       cell_potential(stack, geo, c, tau)) / geo.vol;
        });
        rep.per_cell = std::move(dens);
    }
    return rep;
}

std::vector<char> interior_free_nodes(const Grid& grid) {
    std::vector<char> free(grid.node_count(), 0);
    const int nx = grid.nodes(0);
    const int ny = grid.dim() == 2 ? grid.nodes(1) : 1;
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix)
            free[grid.node_index(ix, iy)] = !grid.is_boundary_node(ix, iy);
    return free;
}

void energy_gradient_into(const MembraneStack& stack, double delta,
                          const CellMask& mask,
                          const std::vector<char>& free_nodes,
                          std::vector<std::vector<double>>& grad) {
    if (!(delta > 0)) throw std::invalid_argument("energy_gradient: delta <= 0");
    const Grid& g = stack.grid();
    const CellGeom geo(g);
    const int n = stack.n_membranes();
    const int nx = g.nodes(0);
    const int ny = g.dim() == 2 ? g.nodes(1) : 1;

    grad.resize(n);
    for (auto& gi : grad) gi.assign(g.node_count(), 0.0);

    // Gather form: each node collects the partial derivatives of its adjacent
    // cells' energies, so the parallel loop is race-free and deterministic.
    parallel_for(g.node_count(), [&](std::size_t p) {
        if (!free_nodes.empty() && !free_nodes[p]) return;
        const int ix = int(p % nx);
        const int iy = int(p / nx);

        if (g.dim() == 1) {
            for (int dc = -1; dc <= 0; ++dc) {
                const int c = ix + dc;
                if (c < 0 || c >= g.cells(0)) continue;
                if (!mask.empty() && !mask[c]) continue;
                const double sgn = (dc == 0) ? -1.0 : 1.0;  // node is left/right end
                for (int i = 0; i < n; ++i) {
                    const auto& u = stack.field(i).data();
                    const double s = (u[c + 1] - u[c]) / geo.hx;
                    double gi = geo.vol * 2 * s * sgn / geo.hx;
                    // potential: gap d_i involves +u_i, d_{i-1} involves -u_i
                    if (i + 1 < n)
                        gi += geo.vol * 0.5 *
                              smoothstep_ramp_deriv(cell_gap(stack, geo, c, i), delta);
                    if (i > 0)
                        gi -= geo.vol * 0.5 *
                              smoothstep_ramp_deriv(cell_gap(stack, geo, c, i - 1), delta);
                    grad[i][p] += gi;
                }
            }
            return;
        }

        for (int dy = -1; dy <= 0; ++dy)
            for (int dx = -1; dx <= 0; ++dx) {
                const int cx = ix + dx, cy = iy + dy;
                if (cx < 0 || cx >= g.cells(0) || cy < 0 || cy >= g.cells(1)) continue;
                const std::size_t cell = std::size_t(cy) * geo.ncx + cx;
                if (!mask.empty() && !mask[cell]) continue;
                // corner of this cell occupied by node p: (-dx, -dy) in {0,1}^2
                const int kx = -dx, kyy = -dy;
                const std::size_t p00 = g.node_index(cx, cy), p10 = p00 + 1;
                const std::size_t p01 = g.node_index(cx, cy + 1), p11 = p01 + 1;

                std::array<double, 3> sprime{};  // ramp' of gaps (max N-1 = small stack)
                std::vector<double> sp;
                const double* spd = nullptr;
                if (n - 1 <= 3) {
                    for (int i = 0; i + 1 < n; ++i)
                        sprime[i] = smoothstep_ramp_deriv(cell_gap(stack, geo, cell, i), delta);
                    spd = sprime.data();
                } else {
                    sp.resize(n - 1);
                    for (int i = 0; i + 1 < n; ++i)
                        sp[i] = smoothstep_ramp_deriv(cell_gap(stack, geo, cell, i), delta);
                    spd = sp.data();
                }

                for (int i = 0; i < n; ++i) {
                    const auto& u = stack.field(i).data();
                    const double sx0 = (u[p10] - u[p00]) / geo.hx;
                    const double sx1 = (u[p11] - u[p01]) / geo.hx;
                    const double sy0 = (u[p01] - u[p00]) / geo.hy;
                    const double sy1 = (u[p11] - u[p10]) / geo.hy;
                    // derivative of vol*((sx0^2+sx1^2)/2 + (sy0^2+sy1^2)/2)
                    const double sx = (kyy == 0) ? sx0 : sx1;
                    const double sy = (kx == 0) ? sy0 : sy1;
                    const double dirpart =
                        geo.vol * (sx * (kx == 0 ? -1.0 : 1.0) / geo.hx +
                                   sy * (kyy == 0 ? -1.0 : 1.0) / geo.hy);
                    double pot = 0.0;
                    if (i + 1 < n) pot += spd[i];
                    if (i > 0) pot -= spd[i - 1];
                    grad[i][p] += dirpart + geo.vol * 0.25 * pot;
                }
            }
    });
}

void potential_gradient_into(const MembraneStack& stack, double delta,
                             const CellMask& mask,
                             const std::vector<char>& free_nodes,
                             std::vector<std::vector<double>>& grad) {
    if (!(delta > 0)) throw std::invalid_argument("potential_gradient: delta <= 0");
    const Grid& g = stack.grid();
    const CellGeom geo(g);
    const int n = stack.n_membranes();
    const int nx = g.nodes(0);

    grad.resize(n);
    for (auto& gi : grad) gi.assign(g.node_count(), 0.0);

    parallel_for(g.node_count(), [&](std::size_t p) {
        if (!free_nodes.empty() && !free_nodes[p]) return;
        const int ix = int(p % nx);
        const int iy = int(p / nx);

        if (g.dim() == 1) {
            for (int dc = -1; dc <= 0; ++dc) {
                const int c = ix + dc;
                if (c < 0 || c >= g.cells(0)) continue;
                if (!mask.empty() && !mask[c]) continue;
                for (int i = 0; i < n; ++i) {
                    double gi = 0.0;
                    if (i + 1 < n)
                        gi += geo.vol * 0.5 *
                              smoothstep_ramp_deriv(cell_gap(stack, geo, c, i), delta);
                    if (i > 0)
                        gi -= geo.vol * 0.5 *
                              smoothstep_ramp_deriv(cell_gap(stack, geo, c, i - 1), delta);
                    grad[i][p] += gi;
                }
            }
            return;
        }

        for (int dy = -1; dy <= 0; ++dy)
            for (int dx = -1; dx <= 0; ++dx) {
                const int cx = ix + dx, cy = iy + dy;
                if (cx < 0 || cx >= g.cells(0) || cy < 0 || cy >= g.cells(1)) continue;
                const std::size_t cell = std::size_t(cy) * geo.ncx + cx;
                if (!mask.empty() && !mask[cell]) continue;
                for (int i = 0; i < n; ++i) {
                    double pot = 0.0;
                    if (i + 1 < n)
                        pot += smoothstep_ramp_deriv(cell_gap(stack, geo, cell, i), delta);
                    if (i > 0)
                        pot -= smoothstep_ramp_deriv(cell_gap(stack, geo, cell, i - 1), delta);
                    grad[i][p] += geo.vol * 0.25 * pot;
                }
            }
    });
}

std::vector<std::vector<double>> energy_gradient(const MembraneStack& stack,
                                                 double delta,
                                                 const CellMask& mask,
                                                 const std::vector<char>& free_nodes) {
    std::vector<std::vector<double>> grad;
    const std::vector<char>& fn =
        free_nodes.empty() ? interior_free_nodes(stack.grid()) : free_nodes;
    energy_gradient_into(stack, delta, mask, fn, grad);
    return grad;
}

}  // namespace membrane
