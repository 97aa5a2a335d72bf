#pragma once

#include <span>
#include <vector>

namespace membrane {

// Euclidean projection onto the nonincreasing cone {w_1 >= ... >= w_N} by
// pool-adjacent-violators. Idempotent.
void isotonic_project_inplace(std::span<double> v);

std::vector<double> isotonic_project(std::vector<double> v);

}  // namespace membrane
