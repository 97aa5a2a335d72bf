#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "membrane/grid.hpp"

namespace membrane {

// One scalar field per grid node, row-major.
class ScalarField {
public:
    explicit ScalarField(const Grid& grid, double fill = 0.0)
        : grid_(grid), values_(grid.node_count(), fill) {}

    const Grid& grid() const { return grid_; }
    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }
    double& at(int ix, int iy = 0) { return values_[grid_.node_index(ix, iy)]; }
    double at(int ix, int iy = 0) const { return values_[grid_.node_index(ix, iy)]; }
    std::size_t size() const { return values_.size(); }
    std::vector<double>& data() { return values_; }
    const std::vector<double>& data() const { return values_; }

    bool all_finite() const {
        for (double v : values_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    // Bilinear (linear in 1D) interpolation at a physical point, clamped to the
    // grid extents.
    double interpolate(double x, double y = 0.0) const;

private:
    Grid grid_;
    std::vector<double> values_;
};

// Ordered vector of N membranes over one grid: u_1 >= u_2 >= ... >= u_N,
// checked up to feasibility_tol.
class MembraneStack {
public:
    MembraneStack(const Grid& grid, int n_membranes, double feasibility_tol = 1e-12)
        : grid_(grid), tol_(feasibility_tol) {
        if (n_membranes < 2)
            throw std::invalid_argument("MembraneStack: need N >= 2 membranes");
        if (feasibility_tol < 0)
            throw std::invalid_argument("MembraneStack: negative feasibility_tol");
        fields_.reserve(n_membranes);
        for (int i = 0; i < n_membranes; ++i) fields_.emplace_back(grid);
    }

    const Grid& grid() const { return grid_; }
    int n_membranes() const { return int(fields_.size()); }
    double feasibility_tol() const { return tol_; }
    void set_feasibility_tol(double t) { tol_ = t; }

    ScalarField& field(int i) { return fields_[i]; }
    const ScalarField& field(int i) const { return fields_[i]; }

    double value(int i, std::size_t node) const { return fields_[i][node]; }

    bool is_ordered() const {
        const std::size_t n = grid_.node_count();
        for (int i = 0; i + 1 < n_membranes(); ++i)
            for (std::size_t p = 0; p < n; ++p)
                if (fields_[i][p] < fields_[i + 1][p] - tol_) return false;
        return true;
    }

    bool all_finite() const {
        for (const auto& f : fields_)
            if (!f.all_finite()) return false;
        return true;
    }

    // Largest ordering violation over all nodes and consecutive pairs.
    double max_violation() const {
        double worst = 0.0;
        const std::size_t n = grid_.node_count();
        for (int i = 0; i + 1 < n_membranes(); ++i)
            for (std::size_t p = 0; p < n; ++p)
                worst = std::max(worst, fields_[i + 1][p] - fields_[i][p]);
        return worst;
    }

private:
    Grid grid_;
    double tol_;
    std::vector<ScalarField> fields_;
};

inline double ScalarField::interpolate(double x, double y) const {
    const Grid& g = grid_;
    auto locate = [](double t, double lo, double h, int cells) {
        double s = (t - lo) / h;
        if (s < 0) s = 0;
        if (s > cells) s = cells;
        int c = int(s);
        if (c >= cells) c = cells - 1;
        return std::pair<int, double>(c, s - c);
    };
    auto [cx, fx] = locate(x, g.lo(0), g.h(0), g.cells(0));
    if (g.dim() == 1) {
        return (1 - fx) * values_[g.node_index(cx)] + fx * values_[g.node_index(cx + 1)];
    }
    auto [cy, fy] = locate(y, g.lo(1), g.h(1), g.cells(1));
    const double v00 = values_[g.node_index(cx, cy)];
    const double v10 = values_[g.node_index(cx + 1, cy)];
    const double v01 = values_[g.node_index(cx, cy + 1)];
    const double v11 = values_[g.node_index(cx + 1, cy + 1)];
    return (1 - fy) * ((1 - fx) * v00 + fx * v10) + fy * ((1 - fx) * v01 + fx * v11);
}

}  // namespace membrane
