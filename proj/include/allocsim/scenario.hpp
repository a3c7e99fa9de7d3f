#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "allocsim/errors.hpp"
#include "allocsim/rng.hpp"

namespace allocsim {

enum class Personality { Conservative, Astute, Neutral };
enum class Orientation { N, S, E, W, SE, SW, NE, NW };
enum class Bathroom { Private, Shared };
enum class Decoration { Basic, Standard, Premium };
enum class Relation { Friend, Colleague, Mate, Competitor, Enemy, Stranger };

std::string to_string(Personality v);
std::string to_string(Orientation v);
std::string to_string(Bathroom v);
std::string to_string(Decoration v);
std::string to_string(Relation v);
Personality personality_from_string(const std::string& s);
Orientation orientation_from_string(const std::string& s);
Bathroom bathroom_from_string(const std::string& s);
Decoration decoration_from_string(const std::string& s);
Relation relation_from_string(const std::string& s);

// The four resource features participants weigh when scoring a house.
inline const std::vector<std::string>& resource_features() {
  static const std::vector<std::string> f = {"rent", "size", "orientation", "floor"};
  return f;
}

struct ParticipantProfile {
  int id = 0;
  std::string name;
  int family_size = 1;
  double monthly_income = 0.0;
  double rent_budget = 0.0;
  std::map<std::string, double> feature_weights;  // over resource_features()
  Personality personality = Personality::Neutral;
  double honesty = 1.0;  // probability of truthful intent
  int entry_round = 0;
};

double per_capita_budget(const ParticipantProfile& p);

struct HouseResource {
  int id = 0;
  int community_id = 0;
  double size = 0.0;  // m^2
  double rent = 0.0;  // currency / month
  Orientation orientation = Orientation::S;
  int floor = 1;
  Bathroom bathroom = Bathroom::Private;
  Decoration decoration = Decoration::Standard;
  std::string disclosed;    // public listing summary
  std::string undisclosed;  // revealed to the tenant after selection
  int entry_round = 0;
};

struct SocialEdge {
  int a = 0;
  int b = 0;
  Relation relation = Relation::Stranger;
};

struct SocialGraph {
  std::vector<SocialEdge> edges;

  std::vector<int> neighbors(int participant_id) const;
  std::optional<Relation> relation_between(int a, int b) const;
  // Connected components over the edge set; isolated ids are not listed.
  std::vector<std::vector<int>> components(const std::vector<int>& all_ids) const;
};

// Bucketed 0..10 scores for resource features. Numeric features use
// half-open buckets (value < upper); the last bucket is unbounded.
class RatingTable {
 public:
  struct NumericBucket {
    double upper;  // +inf for the last bucket
    double score;
  };

  void set_numeric(const std::string& feature, std::vector<NumericBucket> buckets);
  void set_categorical(const std::string& feature, std::map<std::string, double> scores);

  // Throws ValidationError naming the feature when no bucket covers the value.
  double score_numeric(const std::string& feature, double value) const;
  double score_categorical(const std::string& feature, const std::string& value) const;
  double score_resource_feature(const std::string& feature, const HouseResource& r) const;

  // Index of the bucket containing the value (used as the "house type" key).
  int bucket_index(const std::string& feature, double value) const;

  bool covers(const HouseResource& r) const;

  const std::map<std::string, std::vector<NumericBucket>>& numeric() const { return numeric_; }
  const std::map<std::string, std::map<std::string, double>>& categorical() const {
    return categorical_;
  }

  // The fixed table documented in docs/rating_table.md.
  static RatingTable default_table();

 private:
  std::map<std::string, std::vector<NumericBucket>> numeric_;
  std::map<std::string, std::map<std::string, double>> categorical_;
};

struct Scenario {
  std::vector<ParticipantProfile> participants;
  std::vector<HouseResource> resources;
  SocialGraph graph;
  RatingTable rating_table;

  const ParticipantProfile& participant(int id) const;
  const HouseResource& resource(int id) const;
};

struct ScenarioSpec {
  int n_participants = 0;
  int n_resources = 0;
  int community_count = 0;  // 0 = auto: ceil(n_resources / 10)

  // Distribution knobs; stand-ins for undisclosed real-world data.
  double budget_log_mean = std::log(900.0);  // per-capita monthly rent budget
  double budget_log_sigma = 0.55;
  double income_ratio_min = 0.25;  // rent budget as a fraction of income
  double income_ratio_max = 0.40;
  double size_min = 15.0;  // m^2
  double size_max = 120.0;
  double rent_per_m2 = 28.0;
  double rent_noise = 0.10;
  int family_min = 1;
  int family_max = 5;
};

enum class QualityVariant { S, H, B };
QualityVariant quality_variant_from_string(const std::string& s);
std::string to_string(QualityVariant v);

// Deterministic function of (spec, seed); throws ValidationError on a bad spec.
Scenario generate_scenario(const ScenarioSpec& spec, uint64_t seed);

// S: identity. H: each house becomes two half-size half-rent houses.
// B: every bathroom becomes shared.
std::vector<HouseResource> apply_quality_variant(const std::vector<HouseResource>& resources,
                                                 QualityVariant variant);

void validate_scenario(const Scenario& s);  // throws ValidationError

}  // namespace allocsim
