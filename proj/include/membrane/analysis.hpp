#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "membrane/energy.hpp"
#include "membrane/stack.hpp"

namespace membrane {

using Point = std::array<double, 2>;

struct WeissProfile {
    Point center{0, 0};
    std::vector<double> radii;
    std::vector<double> phi;
    double min_increment = 0.0;  // smallest consecutive phi difference
};

struct Polyline {
    std::vector<Point> pts;
};

struct FreeBoundarySet {
    // gamma[i]: contours of {u_i > u_{i+1}} at level tau; points in 1D are
    // single-vertex polylines
    std::vector<std::vector<Polyline>> gamma;
    std::vector<Point> junctions;  // distinct gamma indices within 2h, clustered
};

struct JunctionFit {
    double rotation = 0.0;         // best-fitting rotation of the reference cone
    double residual = 0.0;         // relative sup... rms misfit on the fit annulus
    std::vector<double> ray_angles;
    bool classified = false;
};

// Scale-normalized energy minus boundary term, after subtracting the nodal
// average field (sum u_i)/N. Radii must keep the ball inside the grid.
WeissProfile weiss_profile(const MembraneStack& stack, Point center,
                           const std::vector<double>& radii, double tau = 0.0);

// Resample U(center + r x)/r onto a reference grid over [-1,1]^dim.
MembraneStack rescale_blowup(const MembraneStack& stack, Point center, double r,
                             int ref_cells = 128);

FreeBoundarySet extract_free_boundaries(const MembraneStack& stack, double tau);

// Least-squares fit of the blow-up at a junction against rotations of the
// two-ray/two-ray reference cone; 0.5 degree grid search then golden-section.
JunctionFit junction_fit(const MembraneStack& stack, Point junction,
                         double fit_radius, double residual_threshold = 0.05);

// Branch-point energy balance for 1D stacks: |sum of squared relative slopes
// minus the separation count| over a window on the separated side.
double equipartition_residual(const MembraneStack& stack, double branch_point,
                              int window_cells, double tau = 0.0);

double sup_norm_on_ball(const MembraneStack& stack, Point center, double r);

// Copy with the nodal average (sum u_i)/N subtracted from every membrane.
MembraneStack subtract_average(const MembraneStack& stack);

void write_weiss_csv(const std::string& path, const WeissProfile& profile);
void write_boundaries_csv(const std::string& path, const FreeBoundarySet& fb);
// Gap heatmap plus contour overlay, one color per free-boundary index.
void write_boundaries_svg(const std::string& path, const MembraneStack& stack,
                          const FreeBoundarySet& fb);

}  // namespace membrane
