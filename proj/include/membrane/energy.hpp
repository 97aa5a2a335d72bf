#pragma once

#include <optional>
#include <vector>

#include "membrane/stack.hpp"

namespace membrane {

// Per-cell inclusion mask; empty means the whole grid. Used to restrict
// rectangular grids to balls (cell-center inclusion test).
using CellMask = std::vector<char>;

CellMask all_cells(const Grid& grid);
CellMask disk_cells(const Grid& grid, double cx, double cy, double radius);

struct EnergyReport {
    double dirichlet = 0.0;
    double potential = 0.0;
    double total = 0.0;
    double tau = 0.0;
    std::optional<std::vector<double>> per_cell;  // density per cell, row-major
};

// Annealing schedule for the smoothed potential: delta_k = delta0 * ratio^k,
// clamped at delta_min.
struct SmoothingSchedule {
    double delta0 = 0.1;
    double ratio = 0.5;
    double delta_min = 1e-3;

    std::vector<double> levels() const;
};

// C1 ramp: 0 for t <= 0, 3(t/d)^2 - 2(t/d)^3 on (0, d), 1 for t >= d.
double smoothstep_ramp(double t, double delta);
double smoothstep_ramp_deriv(double t, double delta);

// Sum over cells of h^dim * sum_i |grad_h u_i|^2, forward differences averaged
// over the cell's stencils (exact for fields affine on each cell).
double dirichlet_energy(const MembraneStack& stack, const CellMask& mask = {});

// Sum over cells of h^dim * #{i : cell-center gap u_i - u_{i+1} > tau}.
double potential_energy(const MembraneStack& stack, double tau,
                        const CellMask& mask = {});

// Potential with the ramp s_delta applied to the cell-center gaps.
double smoothed_potential(const MembraneStack& stack, double delta,
                          const CellMask& mask = {});

// dirichlet_energy + smoothed_potential in one pass.
double smoothed_energy(const MembraneStack& stack, double delta,
                       const CellMask& mask = {});

EnergyReport total_energy(const MembraneStack& stack, double tau,
                          const CellMask& mask = {}, bool per_cell = false);

// Exact gradient of smoothed_energy with respect to nodal values, one vector
// per membrane. Nodes flagged 0 in `free_nodes` carry zero gradient; an empty
// mask means all interior nodes are free (Dirichlet data fixed).
std::vector<std::vector<double>> energy_gradient(const MembraneStack& stack,
                                                 double delta,
                                                 const CellMask& mask = {},
                                                 const std::vector<char>& free_nodes = {});

// In-place variant writing into grad (shaped [n_membranes][node_count]).
void energy_gradient_into(const MembraneStack& stack, double delta,
                          const CellMask& mask,
                          const std::vector<char>& free_nodes,
                          std::vector<std::vector<double>>& grad);

// Gradient of smoothed_potential alone (no Dirichlet part), same layout.
void potential_gradient_into(const MembraneStack& stack, double delta,
                             const CellMask& mask,
                             const std::vector<char>& free_nodes,
                             std::vector<std::vector<double>>& grad);

std::vector<char> interior_free_nodes(const Grid& grid);

}  // namespace membrane
