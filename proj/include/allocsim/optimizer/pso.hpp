#pragma once

#include <vector>

#include "allocsim/optimizer/ga.hpp"
#include "allocsim/policy.hpp"

namespace allocsim {

struct PsoParams {
  int swarm_size = 24;
  double inertia = 0.7;
  double cognitive = 1.5;  // pull toward the particle's own best
  double social = 1.5;     // pull toward the swarm best
  int iterations = 50;
  uint64_t seed = 0;
};

struct PsoResult {
  Policy best;
  PolicyVector best_vector;
  double best_fitness = 0.0;
  std::vector<IterationStats> history;
};

// Velocity/position updates on the encoded vectors with the same
// decode/encode repair as the GA. Comparator only: the mixed discrete
// domains are hostile to PSO dynamics, which is the point of the comparison.
PsoResult pso_optimize(const VectorFitnessFn& fitness, const PsoParams& params);

}  // namespace allocsim
