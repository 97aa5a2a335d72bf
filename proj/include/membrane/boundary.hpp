#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "membrane/cones.hpp"
#include "membrane/stack.hpp"

namespace membrane {

// Trace of a single closed-form cone, centered at a point.
struct ConeTrace {
    ConeSpec spec;
    double center_x = 0.0;
    double center_y = 0.0;
};

// phi(x1) * trace_a + (1 - phi(x1)) * trace_b with a smoothstep blend profile
// that is 0 for x1 <= blend_lo and 1 for x1 >= blend_hi.
struct BlendedTrace {
    ConeTrace when_one;   // selected where phi = 1
    ConeTrace when_zero;  // selected where phi = 0
    double blend_lo = -1.0;
    double blend_hi = 1.0;
};

// Explicit nodal values for every boundary node; validated for ordering.
struct ExplicitTrace {
    MembraneStack values;
};

class BoundaryData {
public:
    BoundaryData(ConeTrace t) : data_(std::move(t)) {}
    BoundaryData(BlendedTrace t) : data_(std::move(t)) {}
    BoundaryData(ExplicitTrace t) : data_(std::move(t)) {}

    // Ordered N-vector at a physical point (boundary nodes in practice).
    std::vector<double> evaluate(int n_membranes, double x, double y = 0.0) const;

private:
    std::variant<ConeTrace, BlendedTrace, ExplicitTrace> data_;
};

double smoothstep(double t);  // 0 for t<=0, 3t^2-2t^3 on (0,1), 1 for t>=1

// Nodal evaluation of a closed form; result is ordered with tau_feas = 0.
MembraneStack sample_cone(const ConeSpec& spec, const Grid& grid,
                          double center_x = 0.0, double center_y = 0.0);

// Overwrite boundary nodes from the data; interior untouched. Throws if the
// data violates the ordering at any boundary node.
void apply_boundary(MembraneStack& stack, const BoundaryData& data);

}  // namespace membrane
