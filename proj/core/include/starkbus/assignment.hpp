#pragma once

#include <vector>

#include <Eigen/Dense>

namespace starkbus {

/// Maximum-weight perfect matching on a square weight matrix (Hungarian
/// method, O(n^3)). Returns column[row]. Ties are broken toward the lowest
/// column index, so the result is deterministic.
std::vector<int> max_weight_assignment(const Eigen::MatrixXd &weights);

} // namespace starkbus
