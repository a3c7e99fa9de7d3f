#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "allocsim/policy.hpp"
#include "allocsim/rng.hpp"

namespace allocsim {

struct GAParams {
  int pool_size = 24;
  int tournament_size = 3;
  double crossover_prob = 0.9;
  double mutation_prob = 0.2;     // per gene
  double sigma_fraction = 0.2;    // sigma = fraction * gene range
  int iterations = 50;            // M
  int elitism = 2;
  uint64_t seed = 0;
  bool parallel_eval = false;     // fitness calls are pure; order-independent
};

using VectorFitnessFn = std::function<double(const PolicyVector&)>;

// Max-fitness member of a t-sample drawn without replacement; ties go to the
// lower pool index.
int tournament_select(const std::vector<double>& fitness, int t, Rng& rng);

// child = a[0..p1) + b[p1..p2) + a[p2..), 0 < p1 < p2 < len.
PolicyVector two_point_crossover(const PolicyVector& a, const PolicyVector& b, int p1, int p2);
PolicyVector two_point_crossover(const PolicyVector& a, const PolicyVector& b, Rng& rng);

// Per-gene Gaussian noise with probability mutation_prob, then repair through
// decode/encode so the result is always a valid policy's vector.
PolicyVector gaussian_mutate(const PolicyVector& v, double mutation_prob,
                             double sigma_fraction, Rng& rng);

struct IterationStats {
  int iteration = 0;
  double mean_fitness = 0.0;
  double max_fitness = 0.0;
};

struct PoaResult {
  Policy best;
  PolicyVector best_vector;
  double best_fitness = 0.0;
  std::vector<IterationStats> history;  // iterations + 1 entries (initial pool first)
};

// Genetic policy search: seed the pool with historical policies (random fill
// to pool_size), then run fitness -> tournament selection -> two-point
// crossover -> Gaussian mutation -> generational replacement with elitism.
PoaResult poa_optimize(const std::vector<Policy>& historical,
                       const VectorFitnessFn& fitness,
                       const GAParams& params);

}  // namespace allocsim
