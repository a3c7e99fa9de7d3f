#include "allocsim/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace allocsim {

std::string to_string(EntryRule v) {
  switch (v) {
    case EntryRule::Rent: return "rent";
    case EntryRule::Family: return "family";
    case EntryRule::Select: return "select";
    case EntryRule::Random: return "random";
  }
  return "random";
}

EntryRule entry_rule_from_string(const std::string& s) {
  if (s == "rent") return EntryRule::Rent;
  if (s == "family") return EntryRule::Family;
  if (s == "select") return EntryRule::Select;
  if (s == "random") return EntryRule::Random;
  throw ValidationError("unknown entry rule: '" + s + "'");
}

std::string to_string(SortRule v) {
  switch (v) {
    case SortRule::Fifo: return "FIFO";
    case SortRule::Vfa: return "VFA";
    case SortRule::Vfr: return "VFR";
  }
  return "FIFO";
}

SortRule sort_rule_from_string(const std::string& s) {
  if (s == "FIFO") return SortRule::Fifo;
  if (s == "VFA") return SortRule::Vfa;
  if (s == "VFR") return SortRule::Vfr;
  throw ValidationError("unknown sort rule: '" + s + "'");
}

std::string to_string(ResourceRule v) {
  switch (v) {
    case ResourceRule::Size: return "size";
    case ResourceRule::Rent: return "rent";
    case ResourceRule::Random: return "random";
  }
  return "random";
}

ResourceRule resource_rule_from_string(const std::string& s) {
  if (s == "size") return ResourceRule::Size;
  if (s == "rent") return ResourceRule::Rent;
  if (s == "random") return ResourceRule::Random;
  throw ValidationError("unknown resource rule: '" + s + "'");
}

std::vector<double> Policy::equal_shares(int m) {
  std::vector<double> out(static_cast<size_t>(std::max(m, 0)));
  for (auto& v : out) v = 1.0 / m;
  return out;
}

bool Policy::operator==(const Policy& other) const {
  if (m != other.m || entry_rule != other.entry_rule || sort_rule != other.sort_rule ||
      k != other.k || c != other.c || resource_rule != other.resource_rule ||
      batch_p != other.batch_p || batch_r != other.batch_r ||
      proportions.size() != other.proportions.size())
    return false;
  for (size_t i = 0; i < proportions.size(); ++i) {
    if (std::abs(proportions[i] - other.proportions[i]) > 1e-12) return false;
  }
  return true;
}

const Policy& validate_policy(const Policy& p) {
  std::vector<std::string> problems;
  if (p.m < 1 || p.m > 5) problems.push_back("m out of range [1,5]");
  if (p.k < 1) problems.push_back("k must be >= 1");
  if (p.c < 1.0) problems.push_back("c must be >= 1.0");
  if (p.batch_p < 1) problems.push_back("batch_p must be >= 1");
  if (p.batch_r < 1) problems.push_back("batch_r must be >= 1");
  if (static_cast<int>(p.proportions.size()) != p.m) {
    problems.push_back("proportions length != m");
  } else {
    double sum = 0.0;
    bool positive = true;
    for (double v : p.proportions) {
      sum += v;
      positive = positive && v > 0.0;
    }
    if (std::abs(sum - 1.0) > 1e-9) problems.push_back("proportions sum != 1");
    if (!positive) problems.push_back("proportions must each be > 0");
  }
  if (!problems.empty()) {
    std::string msg = "invalid policy:";
    for (const auto& s : problems) msg += "\n  " + s;
    throw ValidationError(msg);
  }
  return p;
}

const std::vector<GeneDomain>& gene_domains() {
  static const std::vector<GeneDomain> table = {
      {"m", GeneKind::Integer, 1.0, 5.0, {}},
      {"entry_rule", GeneKind::Categorical, 0.0, 0.0, {"rent", "family", "select", "random"}},
      {"sort_rule", GeneKind::Categorical, 0.0, 0.0, {"FIFO", "VFA", "VFR"}},
      {"k", GeneKind::Integer, 1.0, 5.0, {}},
      {"c", GeneKind::Real, 1.0, 4.0, {}},
      {"resource_rule", GeneKind::Categorical, 0.0, 0.0, {"size", "rent", "random"}},
      {"batch_p", GeneKind::Categorical, 0.0, 0.0, {"5", "10", "20"}},
      {"batch_r", GeneKind::Categorical, 0.0, 0.0, {"5", "10", "20"}},
  };
  return table;
}

namespace {

int category_index(const GeneDomain& domain, const std::string& value) {
  for (size_t i = 0; i < domain.categories.size(); ++i) {
    if (domain.categories[i] == value) return static_cast<int>(i);
  }
  throw ValidationError("gene '" + domain.name + "': value '" + value + "' not in domain");
}

// Nearest listed batch value; exact on {5, 10, 20}.
int nearest_batch_index(const GeneDomain& domain, int value) {
  int best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < domain.categories.size(); ++i) {
    const double cat = std::stod(domain.categories[i]);
    const double d = std::abs(cat - value);
    if (d < best_dist) {
      best_dist = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

double round_half_away(double x) { return std::round(x); }  // std::round is half-away

double clamp(double x, double lo, double hi) { return std::min(hi, std::max(lo, x)); }

}  // namespace

PolicyVector encode_policy(const Policy& p) {
  validate_policy(p);
  const auto& domains = gene_domains();
  Eigen::VectorXd g(static_cast<Eigen::Index>(domains.size()));
  g(0) = static_cast<double>(p.m);
  g(1) = category_index(domains[1], to_string(p.entry_rule));
  g(2) = category_index(domains[2], to_string(p.sort_rule));
  g(3) = static_cast<double>(p.k);
  g(4) = p.c;
  g(5) = category_index(domains[5], to_string(p.resource_rule));
  g(6) = nearest_batch_index(domains[6], p.batch_p);
  g(7) = nearest_batch_index(domains[7], p.batch_r);
  return {g};
}

Policy decode_policy(const PolicyVector& v) {
  const auto& domains = gene_domains();
  if (v.genes.size() != static_cast<Eigen::Index>(domains.size())) {
    throw ValidationError("policy vector length " + std::to_string(v.genes.size()) +
                          " != gene table length " + std::to_string(domains.size()));
  }
  auto as_int = [&](int idx) {
    const auto& d = domains[static_cast<size_t>(idx)];
    return static_cast<int>(clamp(round_half_away(v.genes(idx)), d.lower(), d.upper()));
  };
  auto as_category = [&](int idx) {
    const auto& d = domains[static_cast<size_t>(idx)];
    const int i = static_cast<int>(clamp(round_half_away(v.genes(idx)), 0.0, d.upper()));
    return d.categories[static_cast<size_t>(i)];
  };

  Policy p;
  p.m = as_int(0);
  p.entry_rule = entry_rule_from_string(as_category(1));
  p.sort_rule = sort_rule_from_string(as_category(2));
  p.k = as_int(3);
  p.c = clamp(v.genes(4), domains[4].lo, domains[4].hi);
  p.resource_rule = resource_rule_from_string(as_category(5));
  p.batch_p = std::stoi(as_category(6));
  p.batch_r = std::stoi(as_category(7));
  p.proportions = Policy::equal_shares(p.m);
  return validate_policy(p);
}

PolicyVector random_policy_vector(Rng& rng) {
  const auto& domains = gene_domains();
  Eigen::VectorXd g(static_cast<Eigen::Index>(domains.size()));
  for (size_t i = 0; i < domains.size(); ++i) {
    const auto& d = domains[i];
    switch (d.kind) {
      case GeneKind::Integer:
        g(static_cast<Eigen::Index>(i)) =
            rng.uniform_int(static_cast<int>(d.lo), static_cast<int>(d.hi));
        break;
      case GeneKind::Real:
        g(static_cast<Eigen::Index>(i)) = rng.uniform(d.lo, d.hi);
        break;
      case GeneKind::Categorical:
        g(static_cast<Eigen::Index>(i)) =
            rng.uniform_int(0, static_cast<int>(d.categories.size()) - 1);
        break;
    }
  }
  return {g};
}

Policy random_policy(Rng& rng) { return decode_policy(random_policy_vector(rng)); }

namespace {

Policy make_policy(int m, EntryRule e, SortRule s, int k, double c, ResourceRule r, int bp,
                   int br) {
  Policy p;
  p.m = m;
  p.entry_rule = e;
  p.sort_rule = s;
  p.k = k;
  p.c = c;
  p.resource_rule = r;
  p.batch_p = bp;
  p.batch_r = br;
  p.proportions = Policy::equal_shares(m);
  return p;
}

}  // namespace

const std::vector<std::string>& policy_preset_names() {
  static const std::vector<std::string> names = {"pi_S", "pi_B", "pi_H", "pi_s_star", "pi_f_star"};
  return names;
}

Policy policy_preset(const std::string& name) {
  // Real-world presets; rows showing no waitlist use k = 1.
  if (name == "pi_S")
    return make_policy(1, EntryRule::Random, SortRule::Fifo, 1, 3.0, ResourceRule::Random, 5, 5);
  if (name == "pi_B")
    return make_policy(3, EntryRule::Select, SortRule::Fifo, 1, 2.0, ResourceRule::Size, 5, 5);
  if (name == "pi_H")
    return make_policy(1, EntryRule::Random, SortRule::Vfr, 2, 3.0, ResourceRule::Random, 5, 5);
  if (name == "pi_s_star")
    return make_policy(3, EntryRule::Select, SortRule::Fifo, 4, 4.0, ResourceRule::Size, 5, 5);
  if (name == "pi_f_star")
    return make_policy(3, EntryRule::Select, SortRule::Vfa, 3, 3.0, ResourceRule::Size, 5, 5);
  throw ValidationError("unknown policy preset '" + name + "'");
}

}  // namespace allocsim
