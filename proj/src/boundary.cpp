#include "membrane/boundary.hpp"

#include <cmath>
#include <stdexcept>

namespace membrane {

double smoothstep(double t) {
    if (t <= 0) return 0.0;
    if (t >= 1) return 1.0;
    return t * t * (3 - 2 * t);
}

std::vector<double> BoundaryData::evaluate(int n, double x, double y) const {
    if (auto* t = std::get_if<ConeTrace>(&data_)) {
        auto u = evaluate_cone(t->spec, x - t->center_x, y - t->center_y);
        if (int(u.size()) != n)
            throw std::invalid_argument("BoundaryData: cone membrane count mismatch");
        return u;
    }
    if (auto* t = std::get_if<BlendedTrace>(&data_)) {
        const double phi =
            smoothstep((x - t->blend_lo) / (t->blend_hi - t->blend_lo));
        auto a = evaluate_cone(t->when_one.spec, x - t->when_one.center_x,
                               y - t->when_one.center_y);
        auto b = evaluate_cone(t->when_zero.spec, x - t->when_zero.center_x,
                               y - t->when_zero.center_y);
        if (int(a.size()) != n || int(b.size()) != n)
            throw std::invalid_argument("BoundaryData: cone membrane count mismatch");
        std::vector<double> u(n);
        for (int i = 0; i < n; ++i) u[i] = phi * a[i] + (1 - phi) * b[i];
        return u;
    }
    const auto& t = std::get<ExplicitTrace>(data_);
    if (t.values.n_membranes() != n)
        throw std::invalid_argument("BoundaryData: explicit membrane count mismatch");
    std::vector<double> u(n);
    for (int i = 0; i < n; ++i)
        u[i] = t.values.field(i).interpolate(x, y);
    return u;
}

MembraneStack sample_cone(const ConeSpec& spec, const Grid& grid,
                          double center_x, double center_y) {
    if (grid.dim() < spec.min_dim())
        throw std::invalid_argument("sample_cone: spec needs a " +
                                    std::to_string(spec.min_dim()) + "D grid");
    MembraneStack stack(grid, spec.membranes(), 0.0);
    const int nx = grid.nodes(0);
    const int ny = grid.dim() == 2 ? grid.nodes(1) : 1;
    for (int iy = 0; iy < ny; ++iy) {
        const double y = grid.dim() == 2 ? grid.node_y(iy) - center_y : 0.0;
        for (int ix = 0; ix < nx; ++ix) {
            const double x = grid.node_x(ix) - center_x;
            const auto u = evaluate_cone(spec, x, y);
            const std::size_t p = grid.node_index(ix, iy);
            for (int i = 0; i < stack.n_membranes(); ++i)
                stack.field(i)[p] = u[i];
        }
    }
    return stack;
}

void apply_boundary(MembraneStack& stack, const BoundaryData& data) {
    const Grid& g = stack.grid();
    const int n = stack.n_membranes();
    const int nx = g.nodes(0);
    const int ny = g.dim() == 2 ? g.nodes(1) : 1;
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            if (!g.is_boundary_node(ix, iy)) continue;
            const auto u = data.evaluate(n, g.node_x(ix),
                                         g.dim() == 2 ? g.node_y(iy) : 0.0);
            for (int i = 0; i + 1 < n; ++i)
                if (u[i] < u[i + 1] - stack.feasibility_tol())
                    throw std::invalid_argument(
                        "apply_boundary: ordering violated at a boundary node");
            const std::size_t p = g.node_index(ix, iy);
            for (int i = 0; i < n; ++i) stack.field(i)[p] = u[i];
        }
    }
}

}  // namespace membrane
