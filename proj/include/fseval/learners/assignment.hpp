#pragma once

#include "fseval/types.hpp"

#include <vector>

namespace fseval {

// Minimum-cost perfect matching on a square cost matrix (Hungarian method,
// O(n^3)). Returns col[row].
std::vector<Index> optimal_assignment(const MatrixXd& cost);

double assignment_cost(const MatrixXd& cost, const std::vector<Index>& perm);

}  // namespace fseval
