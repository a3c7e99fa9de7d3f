#pragma once

#include <optional>
#include <string>
#include <vector>

#include "allocsim/agents/rule_backend.hpp"
#include "allocsim/engine.hpp"
#include "allocsim/policy.hpp"
#include "allocsim/scenario.hpp"

namespace allocsim {

struct SweepSpec {
  std::vector<int> m;
  std::vector<std::string> entry_rules;
  std::vector<std::string> sort_rules;
  std::vector<int> k;
  std::vector<double> c;
  std::vector<std::string> resource_rules;
  std::vector<int> batch_p;
  std::vector<int> batch_r;

  bool empty() const;
  // Cartesian grid over the listed fields, unlisted ones taken from base.
  std::vector<Policy> expand(const Policy& base) const;
};

struct OptimizerSpec {
  std::string objective = "satisfaction";  // or "fairness"
  int pool_size = 24;
  int tournament_size = 3;
  double crossover_prob = 0.9;
  double mutation_prob = 0.2;
  double sigma_fraction = 0.2;
  int iterations = 50;
  int elitism = 2;
  double mae_threshold = 0.05;
  int train_batch = 16;
  int max_samples = 160;
};

struct RunConfig {
  std::optional<std::string> scenario_path;
  std::optional<ScenarioSpec> scenario_spec;
  uint64_t scenario_seed = 0;
  QualityVariant quality_variant = QualityVariant::S;

  std::optional<Policy> policy;
  std::optional<std::string> preset;
  SweepSpec sweep;
  OptimizerSpec optimizer;

  std::string backend = "rule";
  RuleParams backend_params;
  std::vector<uint64_t> seeds = {0};
  int max_rounds = 200;
  double vulnerable_fraction = 0.2;
  bool parallel_messaging = false;
  bool social_enabled = true;
  std::string out_dir = ".";
  int jobs = 1;
};

// Strict schema: unknown keys are rejected, exclusivity invariants enforced
// (exactly one scenario source, at most one of policy/preset). Throws
// ValidationError listing every offending key.
RunConfig load_config(const std::string& path);

Scenario make_scenario(const RunConfig& config);
Policy resolve_policy(const RunConfig& config);

// Entry point behind the binary: subcommands simulate | sweep | optimize |
// baseline | report. Returns 0 on success, 1 on validation errors, 2 on I/O
// errors.
int run_command(const std::vector<std::string>& args);

}  // namespace allocsim
