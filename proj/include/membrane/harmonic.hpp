#pragma once

#include <vector>

#include "membrane/stack.hpp"

namespace membrane {

// Solve the discrete Laplace equation (3-point stencil in 1D, 5-point in 2D)
// on the masked node set, keeping the field's values elsewhere as Dirichlet
// data. Mask nodes must be interior to the grid. Empty mask -> identity.
ScalarField harmonic_replacement(const ScalarField& field,
                                 const std::vector<char>& mask);

// Replace every membrane on the same mask (one factorization, N solves).
MembraneStack harmonic_replacement(const MembraneStack& stack,
                                   const std::vector<char>& mask);

// Sup-norm of the discrete Laplacian residual of `field` over the masked nodes.
double laplacian_residual(const ScalarField& field, const std::vector<char>& mask);

}  // namespace membrane
