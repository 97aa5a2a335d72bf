#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace membrane {

// Uniform node-centered rectangular grid in 1 or 2 dimensions.
// Nodes per axis = cells + 1; spacing h = (hi - lo) / cells.
class Grid {
public:
    Grid(int dim, std::array<double, 2> lo, std::array<double, 2> hi,
         std::array<int, 2> cells)
        : dim_(dim), lo_(lo), hi_(hi), cells_(cells) {
        if (dim != 1 && dim != 2)
            throw std::invalid_argument("Grid: dim must be 1 or 2, got " +
                                        std::to_string(dim));
        for (int a = 0; a < dim; ++a) {
            if (!(hi[a] > lo[a]))
                throw std::invalid_argument("Grid: empty extent on axis " +
                                            std::to_string(a));
            if (cells[a] < 2)
                throw std::invalid_argument("Grid: need at least 2 cells per axis");
            h_[a] = (hi[a] - lo[a]) / cells[a];
        }
        if (dim == 1) {
            cells_[1] = 0;
            h_[1] = 0.0;
            lo_[1] = hi_[1] = 0.0;
        }
    }

    static Grid make_1d(double lo, double hi, int cells) {
        return Grid(1, {lo, 0.0}, {hi, 0.0}, {cells, 0});
    }
    static Grid make_2d(double lox, double hix, double loy, double hiy,
                        int cx, int cy) {
        return Grid(2, {lox, loy}, {hix, hiy}, {cx, cy});
    }

    int dim() const { return dim_; }
    double lo(int axis) const { return lo_[axis]; }
    double hi(int axis) const { return hi_[axis]; }
    int cells(int axis) const { return cells_[axis]; }
    double h(int axis) const { return h_[axis]; }
    double max_h() const { return dim_ == 1 ? h_[0] : std::max(h_[0], h_[1]); }

    int nodes(int axis) const { return cells_[axis] + 1; }
    std::size_t node_count() const {
        return dim_ == 1 ? std::size_t(nodes(0))
                         : std::size_t(nodes(0)) * nodes(1);
    }
    std::size_t cell_count() const {
        return dim_ == 1 ? std::size_t(cells_[0])
                         : std::size_t(cells_[0]) * cells_[1];
    }

    // Row-major node indexing, x fastest.
    std::size_t node_index(int ix, int iy = 0) const {
        return std::size_t(iy) * nodes(0) + ix;
    }
    double node_x(int ix) const { return lo_[0] + ix * h_[0]; }
    double node_y(int iy) const { return lo_[1] + iy * h_[1]; }

    double cell_volume() const { return dim_ == 1 ? h_[0] : h_[0] * h_[1]; }
    double cell_center_x(int cx) const { return lo_[0] + (cx + 0.5) * h_[0]; }
    double cell_center_y(int cy) const { return lo_[1] + (cy + 0.5) * h_[1]; }

    bool is_boundary_node(int ix, int iy = 0) const {
        if (ix == 0 || ix == cells_[0]) return true;
        if (dim_ == 2 && (iy == 0 || iy == cells_[1])) return true;
        return false;
    }

    bool same_as(const Grid& o) const {
        if (dim_ != o.dim_) return false;
        for (int a = 0; a < dim_; ++a)
            if (lo_[a] != o.lo_[a] || hi_[a] != o.hi_[a] || cells_[a] != o.cells_[a])
                return false;
        return true;
    }

private:
    int dim_;
    std::array<double, 2> lo_, hi_;
    std::array<int, 2> cells_;
    std::array<double, 2> h_{};
};

inline Grid make_grid(int dim, std::array<double, 2> lo, std::array<double, 2> hi,
                      std::array<int, 2> cells) {
    return Grid(dim, lo, hi, cells);
}

}  // namespace membrane
