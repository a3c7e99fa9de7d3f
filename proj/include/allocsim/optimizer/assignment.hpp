#pragma once

#include <Eigen/Core>
#include <map>

namespace allocsim {

struct AssignmentResult {
  std::map<int, int> assignment;  // row (participant) -> column (resource)
  double sw = 0.0;                // sum of matched utilities
};

// Maximum-weight bipartite matching on a rectangular non-negative utility
// matrix (rows = participants, columns = resources), Kuhn-Munkres with
// potentials on the zero-padded square. The matched sum is a theoretical
// upper bound on any queue-constrained allocation scored by the same matrix.
AssignmentResult km_baseline(const Eigen::MatrixXd& utility);

// Exact maximum by enumeration; the independent oracle for km_baseline.
// Refuses max(rows, cols) > 8.
AssignmentResult exhaustive_assignment(const Eigen::MatrixXd& utility);

}  // namespace allocsim
