#pragma once

#include <iosfwd>
#include <string>

#include "membrane/stack.hpp"

namespace membrane {

// Self-describing text format: header (dim, extents, resolution, N) followed
// by node values in row-major order, one membrane per block, 17 significant
// digits so round trips are bit-exact.
void write_stack(std::ostream& out, const MembraneStack& stack);
void write_stack(const std::string& path, const MembraneStack& stack);

MembraneStack read_stack(std::istream& in);
MembraneStack read_stack(const std::string& path);

std::string format_full(double v);  // shortest decimal that round-trips

}  // namespace membrane
