#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "allocsim/outcome.hpp"
#include "allocsim/scenario.hpp"

namespace allocsim {

// The seven policy-evaluation metrics. f_gap is empty when either group is.
struct MetricsReport {
  double avg_size = 0.0;  // m^2 / person, mean over all n
  double avg_wt = 0.0;    // rounds
  double sw = 0.0;        // sum of U_i
  double var_size = 0.0;  // population variance of per-capita size
  int rop = 0;
  double co_gini = 0.0;
  std::optional<double> f_gap;  // mean U(V) - mean U(NV)
  int n = 0;
  int allocated_count = 0;

  double value(const std::string& key) const;  // throws on unknown key
};

// Stable key/column order: satisfaction block then fairness block.
const std::vector<std::string>& metric_keys();

// Count of ordered pairs of allocated participants where the larger family
// got the smaller house. Quadratic by definition; the formula is its own
// oracle.
int rop(const AllocationOutcome& outcome,
        const std::vector<ParticipantProfile>& participants,
        const std::vector<HouseResource>& resources);

// Mean absolute pairwise difference over 2 n^2 mu. Returns 0 when all values
// are zero.
double gini(const std::vector<double>& values);

// Mean satisfaction gap between the vulnerable and non-vulnerable groups.
// Throws ValidationError when either group is empty.
double group_gap(const AllocationOutcome& outcome,
                 const std::vector<ParticipantProfile>& participants,
                 const std::set<int>& vulnerable);

MetricsReport compute_metrics(const AllocationOutcome& outcome,
                              const std::vector<ParticipantProfile>& participants,
                              const std::vector<HouseResource>& resources,
                              const std::set<int>& vulnerable);

struct MetricWeights {
  std::map<std::string, double> w;
  std::map<std::string, bool> higher_better;

  // Pre-set objectives: satisfaction {avg_size 5, avg_wt 5, sw 10, var_size 1,
  // rop 5, co_gini 1, f_gap 1}, fairness {1, 1, 5, 10, 10, 10, 5}.
  static MetricWeights satisfaction_objective();
  static MetricWeights fairness_objective();
};

// Pool-relative min/max per metric, for Eq.-style normalization.
struct NormalizationStats {
  std::map<std::string, std::pair<double, double>> minmax;

  static NormalizationStats from_reports(const std::vector<MetricsReport>& reports);
};

// f = sum_j w_j * n_j with n_j min-max normalized in the improving direction
// (lower-better metrics inverted). Degenerate max == min (and undefined
// f_gap) contribute the neutral 0.5. Throws on a weight key that is not a
// metric.
double aggregate_f(const MetricsReport& report,
                   const MetricWeights& weights,
                   const NormalizationStats& stats);

}  // namespace allocsim
