#include "membrane/harmonic.hpp"

#include <Eigen/Sparse>
#include <cmath>
#include <stdexcept>

namespace membrane {

namespace {

struct LaplaceSystem {
    std::vector<int> dof;  // node -> unknown index, -1 for fixed
    std::vector<std::size_t> nodes;  // unknown index -> node
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
    const Grid* grid = nullptr;
};

// 5-point (3-point) stencil weights: sum over neighbors of (u_nb - u_p)/h^2.
template <class Visit>
void for_neighbors(const Grid& g, std::size_t p, Visit&& visit) {
    const int nx = g.nodes(0);
    const int ix = int(p % nx), iy = int(p / nx);
    const double wx = 1.0 / (g.h(0) * g.h(0));
    visit(p - 1, wx);
    visit(p + 1, wx);
    if (g.dim() == 2) {
        const double wy = 1.0 / (g.h(1) * g.h(1));
        visit(p - nx, wy);
        visit(p + nx, wy);
    }
    (void)ix;
    (void)iy;
}

void build(const Grid& g, const std::vector<char>& mask, LaplaceSystem& sys) {
    sys.grid = &g;
    sys.dof.assign(g.node_count(), -1);
    const int nx = g.nodes(0);
    for (std::size_t p = 0; p < g.node_count(); ++p) {
        if (!mask[p]) continue;
        const int ix = int(p % nx), iy = int(p / nx);
        if (g.is_boundary_node(ix, iy))
            throw std::invalid_argument("harmonic_replacement: mask touches the grid boundary");
        sys.dof[p] = int(sys.nodes.size());
        sys.nodes.push_back(p);
    }
    const int m = int(sys.nodes.size());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(std::size_t(m) * 5);
    for (int r = 0; r < m; ++r) {
        const std::size_t p = sys.nodes[r];
        double diag = 0;
        for_neighbors(g, p, [&](std::size_t q, double w) {
            diag += w;
            if (sys.dof[q] >= 0) trip.emplace_back(r, sys.dof[q], -w);
        });
        trip.emplace_back(r, r, diag);
    }
    Eigen::SparseMatrix<double> A(m, m);
    A.setFromTriplets(trip.begin(), trip.end());
    sys.solver.compute(A);
    if (sys.solver.info() != Eigen::Success)
        throw std::runtime_error("harmonic_replacement: factorization failed");
}

void solve_one(const LaplaceSystem& sys, const std::vector<char>&,
               ScalarField& field) {
    const Grid& g = *sys.grid;
    const int m = int(sys.nodes.size());
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    for (int r = 0; r < m; ++r) {
        const std::size_t p = sys.nodes[r];
        for_neighbors(g, p, [&](std::size_t q, double w) {
            if (sys.dof[q] < 0) rhs[r] += w * field[q];
        });
    }
    Eigen::VectorXd x = sys.solver.solve(rhs);
    for (int r = 0; r < m; ++r) field[sys.nodes[r]] = x[r];
}

}  // namespace

ScalarField harmonic_replacement(const ScalarField& field,
                                 const std::vector<char>& mask) {
    ScalarField out = field;
    if (mask.empty()) return out;
    if (mask.size() != field.grid().node_count())
        throw std::invalid_argument("harmonic_replacement: mask size mismatch");
    bool any = false;
    for (char c : mask) any |= bool(c);
    if (!any) return out;
    LaplaceSystem sys;
    build(field.grid(), mask, sys);
    solve_one(sys, mask, out);
    return out;
}

MembraneStack harmonic_replacement(const MembraneStack& stack,
                                   const std::vector<char>& mask) {
    MembraneStack out = stack;
    if (mask.empty()) return out;
    bool any = false;
    for (char c : mask) any |= bool(c);
    if (!any) return out;
    LaplaceSystem sys;
    build(stack.grid(), mask, sys);
    for (int i = 0; i < out.n_membranes(); ++i) solve_one(sys, mask, out.field(i));
    return out;
}

double laplacian_residual(const ScalarField& field, const std::vector<char>& mask) {
    const Grid& g = field.grid();
    double worst = 0.0;
    for (std::size_t p = 0; p < g.node_count(); ++p) {
        if (!mask.empty() && !mask[p]) continue;
        const int nx = g.nodes(0);
        const int ix = int(p % nx), iy = int(p / nx);
        if (g.is_boundary_node(ix, iy)) continue;
        double lap = 0;
        for_neighbors(g, p, [&](std::size_t q, double w) { lap += w * (field[q] - field[p]); });
        worst = std::max(worst, std::fabs(lap));
    }
    return worst;
}

}  // namespace membrane
