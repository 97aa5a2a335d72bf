#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "membrane/boundary.hpp"
#include "membrane/energy.hpp"
#include "membrane/stack.hpp"

namespace membrane {

struct MultiStart {
    int count = 4;
    double amplitude_factor = 0.1;  // times the boundary-data oscillation
    std::uint64_t seed = 20240101;
};

struct SolveConfig {
    // Empty schedule -> derived from the grid: delta_min = 2 * max_slope * h,
    // delta0 = max(8 * delta_min, 0.25 * osc), ratio 0.5.
    std::optional<SmoothingSchedule> schedule;
    double step0 = 0.0;        // 0 -> derived from the grid spacing
    double backtrack = 0.5;
    double armijo = 1e-4;
    int max_outer = 4000;      // descent iterations per smoothing level
    double inner_tol = 1e-5;   // projected-gradient sup-norm
    double tau = -1.0;         // sharp separation threshold; <0 -> delta_min / 2
    MultiStart multi_start;
    bool accelerate = true;    // Nesterov extrapolation with monotone safeguard
};

struct SolveResult {
    MembraneStack stack;
    EnergyReport report;       // sharp re-score
    int iterations = 0;
    bool converged = false;
    std::vector<double> trace; // smoothed energy per outer iteration
    std::vector<std::size_t> phase_starts;  // trace index where each smoothing level begins
    double delta_min = 0.0;
    double tau = 0.0;
    int best_run = 0;
};

// Minimize J_N over the ordered cone with Dirichlet data on the grid boundary.
SolveResult solve(const Grid& grid, int n_membranes, const BoundaryData& boundary,
                  const std::optional<MembraneStack>& init, const SolveConfig& cfg);

// General form: fixed nodes are those with free_nodes[p] == 0 and keep their
// values from `init`; energy is restricted to the masked cells.
SolveResult solve_masked(const MembraneStack& init,
                         const std::vector<char>& free_nodes,
                         const CellMask& cell_mask, const SolveConfig& cfg);

// Largest per-cell difference-quotient magnitude over the stack (used to tie
// the smoothing floor to the grid).
double max_slope(const MembraneStack& stack);

}  // namespace membrane
