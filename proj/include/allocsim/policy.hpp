#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "allocsim/errors.hpp"
#include "allocsim/rng.hpp"

namespace allocsim {

enum class EntryRule { Rent, Family, Select, Random };
enum class SortRule { Fifo, Vfa, Vfr };
enum class ResourceRule { Size, Rent, Random };

std::string to_string(EntryRule v);
std::string to_string(SortRule v);
std::string to_string(ResourceRule v);
EntryRule entry_rule_from_string(const std::string& s);
SortRule sort_rule_from_string(const std::string& s);
ResourceRule resource_rule_from_string(const std::string& s);

// One multi-queue allocation policy: queue count, entry condition, sorting
// strategy, waitlist parameters (k choices, capacity multiplier c), resource
// partition rule and per-round admission batches.
struct Policy {
  int m = 1;
  EntryRule entry_rule = EntryRule::Random;
  SortRule sort_rule = SortRule::Fifo;
  int k = 1;
  double c = 1.0;
  ResourceRule resource_rule = ResourceRule::Random;
  int batch_p = 5;
  int batch_r = 5;
  std::vector<double> proportions;  // m positive fractions summing to 1

  bool operator==(const Policy& other) const;

  static std::vector<double> equal_shares(int m);
};

// Returns p unchanged when every invariant holds; otherwise throws
// ValidationError listing each violated field.
const Policy& validate_policy(const Policy& p);

enum class GeneKind { Categorical, Integer, Real };

struct GeneDomain {
  std::string name;
  GeneKind kind;
  double lo = 0.0;
  double hi = 0.0;                       // numeric kinds
  std::vector<std::string> categories;   // categorical kind

  double lower() const { return kind == GeneKind::Categorical ? 0.0 : lo; }
  double upper() const {
    return kind == GeneKind::Categorical ? static_cast<double>(categories.size()) - 1.0 : hi;
  }
  double range() const { return upper() - lower(); }
};

// Static gene layout: m, entry_rule, sort_rule, k, c, resource_rule,
// batch_p, batch_r. Published in docs/gene_table.md.
const std::vector<GeneDomain>& gene_domains();

struct PolicyVector {
  Eigen::VectorXd genes;

  bool operator==(const PolicyVector& other) const { return genes == other.genes; }
};

PolicyVector encode_policy(const Policy& p);

// Total repair: rounds half-away-from-zero, clamps to bounds, snaps
// categoricals to the nearest listed index. proportions come back as equal
// shares of m (they are not part of the gene vector).
Policy decode_policy(const PolicyVector& v);

// Uniform draw over the gene domains, already valid.
Policy random_policy(Rng& rng);
PolicyVector random_policy_vector(Rng& rng);

// Named real-world presets plus the two optimized-policy parameter sets.
// Known names: pi_S, pi_B, pi_H, pi_s_star, pi_f_star.
Policy policy_preset(const std::string& name);
const std::vector<std::string>& policy_preset_names();

}  // namespace allocsim
