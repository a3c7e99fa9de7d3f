#include "allocsim/scenario.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

namespace allocsim {

namespace {

template <class T>
std::string enum_error(const std::string& kind, const T& value) {
  std::ostringstream os;
  os << "unknown " << kind << ": '" << value << "'";
  return os.str();
}

}  // namespace

std::string to_string(Personality v) {
  switch (v) {
    case Personality::Conservative: return "conservative";
    case Personality::Astute: return "astute";
    case Personality::Neutral: return "neutral";
  }
  return "neutral";
}

Personality personality_from_string(const std::string& s) {
  if (s == "conservative") return Personality::Conservative;
  if (s == "astute") return Personality::Astute;
  if (s == "neutral") return Personality::Neutral;
  throw ValidationError(enum_error("personality", s));
}

std::string to_string(Orientation v) {
  switch (v) {
    case Orientation::N: return "N";
    case Orientation::S: return "S";
    case Orientation::E: return "E";
    case Orientation::W: return "W";
    case Orientation::SE: return "SE";
    case Orientation::SW: return "SW";
    case Orientation::NE: return "NE";
    case Orientation::NW: return "NW";
  }
  return "S";
}

Orientation orientation_from_string(const std::string& s) {
  static const std::map<std::string, Orientation> table = {
      {"N", Orientation::N},   {"S", Orientation::S},   {"E", Orientation::E},
      {"W", Orientation::W},   {"SE", Orientation::SE}, {"SW", Orientation::SW},
      {"NE", Orientation::NE}, {"NW", Orientation::NW}};
  auto it = table.find(s);
  if (it == table.end()) throw ValidationError(enum_error("orientation", s));
  return it->second;
}

std::string to_string(Bathroom v) {
  return v == Bathroom::Private ? "private" : "shared";
}

Bathroom bathroom_from_string(const std::string& s) {
  if (s == "private") return Bathroom::Private;
  if (s == "shared") return Bathroom::Shared;
  throw ValidationError(enum_error("bathroom", s));
}

std::string to_string(Decoration v) {
  switch (v) {
    case Decoration::Basic: return "basic";
    case Decoration::Standard: return "standard";
    case Decoration::Premium: return "premium";
  }
  return "standard";
}

Decoration decoration_from_string(const std::string& s) {
  if (s == "basic") return Decoration::Basic;
  if (s == "standard") return Decoration::Standard;
  if (s == "premium") return Decoration::Premium;
  throw ValidationError(enum_error("decoration", s));
}

std::string to_string(Relation v) {
  switch (v) {
    case Relation::Friend: return "friend";
    case Relation::Colleague: return "colleague";
    case Relation::Mate: return "mate";
    case Relation::Competitor: return "competitor";
    case Relation::Enemy: return "enemy";
    case Relation::Stranger: return "stranger";
  }
  return "stranger";
}

Relation relation_from_string(const std::string& s) {
  static const std::map<std::string, Relation> table = {
      {"friend", Relation::Friend},         {"colleague", Relation::Colleague},
      {"mate", Relation::Mate},             {"competitor", Relation::Competitor},
      {"enemy", Relation::Enemy},           {"stranger", Relation::Stranger}};
  auto it = table.find(s);
  if (it == table.end()) throw ValidationError(enum_error("relation", s));
  return it->second;
}

std::string to_string(QualityVariant v) {
  switch (v) {
    case QualityVariant::S: return "S";
    case QualityVariant::H: return "H";
    case QualityVariant::B: return "B";
  }
  return "S";
}

QualityVariant quality_variant_from_string(const std::string& s) {
  if (s == "S") return QualityVariant::S;
  if (s == "H") return QualityVariant::H;
  if (s == "B") return QualityVariant::B;
  throw ValidationError(enum_error("quality variant", s));
}

double per_capita_budget(const ParticipantProfile& p) {
  if (p.family_size < 1) throw ValidationError("family_size must be >= 1");
  return p.rent_budget / p.family_size;
}

std::vector<int> SocialGraph::neighbors(int participant_id) const {
  std::vector<int> out;
  for (const auto& e : edges) {
    if (e.a == participant_id) out.push_back(e.b);
    if (e.b == participant_id) out.push_back(e.a);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<Relation> SocialGraph::relation_between(int a, int b) const {
  for (const auto& e : edges) {
    if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) return e.relation;
  }
  return std::nullopt;
}

std::vector<std::vector<int>> SocialGraph::components(const std::vector<int>& all_ids) const {
  std::map<int, int> comp;
  for (int id : all_ids) comp[id] = id;
  // Union-find with path halving.
  std::function<int(int)> find = [&](int x) {
    while (comp[x] != x) {
      comp[x] = comp[comp[x]];
      x = comp[x];
    }
    return x;
  };
  for (const auto& e : edges) {
    if (!comp.count(e.a) || !comp.count(e.b)) continue;
    int ra = find(e.a), rb = find(e.b);
    if (ra != rb) comp[std::max(ra, rb)] = std::min(ra, rb);
  }
  std::map<int, std::vector<int>> groups;
  for (int id : all_ids) groups[find(id)].push_back(id);
  std::vector<std::vector<int>> out;
  for (auto& [root, members] : groups) {
    std::sort(members.begin(), members.end());
    out.push_back(std::move(members));
  }
  return out;
}

void RatingTable::set_numeric(const std::string& feature, std::vector<NumericBucket> buckets) {
  numeric_[feature] = std::move(buckets);
}

void RatingTable::set_categorical(const std::string& feature,
                                  std::map<std::string, double> scores) {
  categorical_[feature] = std::move(scores);
}

double RatingTable::score_numeric(const std::string& feature, double value) const {
  auto it = numeric_.find(feature);
  if (it == numeric_.end())
    throw ValidationError("rating table has no numeric feature '" + feature + "'");
  for (const auto& b : it->second) {
    if (value < b.upper) return b.score;
  }
  throw ValidationError("rating table bucket missing for feature '" + feature + "' value " +
                        std::to_string(value));
}

int RatingTable::bucket_index(const std::string& feature, double value) const {
  auto it = numeric_.find(feature);
  if (it == numeric_.end())
    throw ValidationError("rating table has no numeric feature '" + feature + "'");
  for (size_t i = 0; i < it->second.size(); ++i) {
    if (value < it->second[i].upper) return static_cast<int>(i);
  }
  throw ValidationError("rating table bucket missing for feature '" + feature + "' value " +
                        std::to_string(value));
}

double RatingTable::score_categorical(const std::string& feature, const std::string& value) const {
  auto it = categorical_.find(feature);
  if (it == categorical_.end())
    throw ValidationError("rating table has no categorical feature '" + feature + "'");
  auto jt = it->second.find(value);
  if (jt == it->second.end())
    throw ValidationError("rating table bucket missing for feature '" + feature + "' value '" +
                          value + "'");
  return jt->second;
}

double RatingTable::score_resource_feature(const std::string& feature,
                                           const HouseResource& r) const {
  if (feature == "rent") return score_numeric("rent", r.rent);
  if (feature == "size") return score_numeric("size", r.size);
  if (feature == "floor") return score_numeric("floor", static_cast<double>(r.floor));
  if (feature == "orientation") return score_categorical("orientation", to_string(r.orientation));
  throw ValidationError("unknown resource feature '" + feature + "'");
}

bool RatingTable::covers(const HouseResource& r) const {
  try {
    for (const auto& f : resource_features()) score_resource_feature(f, r);
  } catch (const ValidationError&) {
    return false;
  }
  return true;
}

RatingTable RatingTable::default_table() {
  RatingTable t;
  constexpr double inf = std::numeric_limits<double>::infinity();
  t.set_numeric("size", {{20.0, 2.0}, {50.0, 5.0}, {90.0, 8.0}, {inf, 10.0}});
  // Cheaper rents score higher.
  t.set_numeric("rent", {{800.0, 10.0}, {1500.0, 8.0}, {3000.0, 6.0}, {6000.0, 4.0}, {inf, 2.0}});
  t.set_numeric("floor", {{2.0, 4.0}, {6.0, 8.0}, {16.0, 10.0}, {inf, 6.0}});
  t.set_categorical("orientation", {{"S", 10.0},
                                    {"SE", 9.0},
                                    {"SW", 8.0},
                                    {"E", 7.0},
                                    {"W", 6.0},
                                    {"NE", 5.0},
                                    {"NW", 4.0},
                                    {"N", 3.0}});
  return t;
}

const ParticipantProfile& Scenario::participant(int id) const {
  for (const auto& p : participants) {
    if (p.id == id) return p;
  }
  throw ValidationError("unknown participant id " + std::to_string(id));
}

const HouseResource& Scenario::resource(int id) const {
  for (const auto& r : resources) {
    if (r.id == id) return r;
  }
  throw ValidationError("unknown resource id " + std::to_string(id));
}

namespace {

const std::array<const char*, 24> kNames = {
    "Ava",    "Ben",   "Clara", "Dan",   "Emma",  "Felix",  "Grace", "Henry",
    "Iris",   "James", "Kira",  "Liam",  "Mia",   "Noah",   "Olive", "Peter",
    "Quinn",  "Rosa",  "Sam",   "Tess",  "Umar",  "Vera",   "Wes",   "Yara"};

const std::array<const char*, 8> kUndisclosed = {
    "quiet at night",
    "thin interior walls",
    "recently repainted",
    "slow elevator at peak hours",
    "good natural light",
    "street noise on weekends",
    "well maintained plumbing",
    "drafty windows in winter"};

std::string format_amount(double v) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(0);
  os << v;
  return os.str();
}

// Order-preserving log-space stretch so max/min per-capita budget >= ratio.
void enforce_budget_span(std::vector<double>& per_capita, double ratio) {
  if (per_capita.size() < 2) return;
  double lo = *std::min_element(per_capita.begin(), per_capita.end());
  double hi = *std::max_element(per_capita.begin(), per_capita.end());
  if (lo <= 0.0 || hi / lo >= ratio) return;
  const double want = std::log(ratio);
  const double have = std::log(hi / lo);
  double mid = 0.0;
  for (double v : per_capita) mid += std::log(v);
  mid /= static_cast<double>(per_capita.size());
  const double scale = want / have;
  for (double& v : per_capita) v = std::exp(mid + (std::log(v) - mid) * scale);
}

}  // namespace

Scenario generate_scenario(const ScenarioSpec& spec, uint64_t seed) {
  if (spec.n_participants < 1) throw ValidationError("n_participants must be >= 1");
  if (spec.n_resources < 1) throw ValidationError("n_resources must be >= 1");
  if (spec.budget_log_sigma < 0.0) throw ValidationError("budget_log_sigma must be >= 0");
  if (spec.size_min <= 0.0 || spec.size_max < spec.size_min)
    throw ValidationError("size range must satisfy 0 < size_min <= size_max");
  if (spec.rent_per_m2 <= 0.0) throw ValidationError("rent_per_m2 must be > 0");
  if (spec.family_min < 1 || spec.family_max < spec.family_min)
    throw ValidationError("family range must satisfy 1 <= family_min <= family_max");
  if (spec.community_count < 0) throw ValidationError("community_count must be >= 0");

  Rng rng(mix64(seed ^ 0xa110c51fULL));
  Scenario s;
  s.rating_table = RatingTable::default_table();

  const int n = spec.n_participants;
  const int r = spec.n_resources;
  const int communities =
      spec.community_count > 0 ? spec.community_count : std::max(1, (r + 9) / 10);

  // Participants: per-capita budget log-normal, stretched to span >= 5x.
  std::vector<double> per_capita(n);
  std::vector<int> family(n);
  for (int i = 0; i < n; ++i) {
    per_capita[i] = rng.lognormal(spec.budget_log_mean, spec.budget_log_sigma);
    family[i] = rng.uniform_int(spec.family_min, spec.family_max);
  }
  enforce_budget_span(per_capita, 5.0);

  const int participant_entry_span = (n + 9) / 10;
  for (int i = 0; i < n; ++i) {
    ParticipantProfile p;
    p.id = i;
    p.name = std::string(kNames[i % kNames.size()]) +
             (i >= static_cast<int>(kNames.size()) ? "-" + std::to_string(i / kNames.size()) : "");
    p.family_size = family[i];
    p.rent_budget = per_capita[i] * family[i];
    const double ratio = rng.uniform(spec.income_ratio_min, spec.income_ratio_max);
    p.monthly_income = ratio > 0.0 ? p.rent_budget / ratio : p.rent_budget;
    double weight_sum = 0.0;
    std::map<std::string, double> w;
    for (const auto& f : resource_features()) {
      const double draw = rng.uniform(0.05, 1.0);
      w[f] = draw;
      weight_sum += draw;
    }
    for (auto& [k, v] : w) v /= weight_sum;
    p.feature_weights = std::move(w);
    const int persona = rng.pick_weighted({0.3, 0.3, 0.4});
    p.personality = persona == 0   ? Personality::Conservative
                    : persona == 1 ? Personality::Astute
                                   : Personality::Neutral;
    p.honesty = rng.uniform(0.0, 1.0);
    p.entry_round = rng.uniform_int(0, participant_entry_span);
    s.participants.push_back(std::move(p));
  }

  // Resources: size uniform, rent proportional to size with a community
  // multiplier and bounded noise.
  const int resource_entry_span = (r + 9) / 10;
  for (int i = 0; i < r; ++i) {
    HouseResource h;
    h.id = i;
    h.community_id = rng.uniform_int(0, communities - 1);
    h.size = rng.uniform(spec.size_min, spec.size_max);
    const double community_mult = 0.85 + 0.1 * (h.community_id % 4);
    const double noise = 1.0 + rng.uniform(-spec.rent_noise, spec.rent_noise);
    h.rent = h.size * spec.rent_per_m2 * community_mult * noise;
    h.orientation = static_cast<Orientation>(rng.uniform_int(0, 7));
    h.floor = rng.uniform_int(1, 20);
    h.bathroom = rng.bernoulli(0.8) ? Bathroom::Private : Bathroom::Shared;
    const int deco = rng.pick_weighted({0.3, 0.5, 0.2});
    h.decoration = deco == 0 ? Decoration::Basic : deco == 1 ? Decoration::Standard
                                                             : Decoration::Premium;
    h.entry_round = rng.uniform_int(0, resource_entry_span);
    std::ostringstream disclosed;
    disclosed << format_amount(h.size) << " m2, " << to_string(h.orientation)
              << "-facing, floor " << h.floor << ", " << to_string(h.decoration)
              << " decoration, " << to_string(h.bathroom) << " bathroom, rent "
              << format_amount(h.rent) << "/month";
    h.disclosed = disclosed.str();
    h.undisclosed = kUndisclosed[rng.uniform_int(0, static_cast<int>(kUndisclosed.size()) - 1)];
    s.resources.push_back(std::move(h));
  }

  // Social graph: dense inside ceil(n/10) groups, sparse across, relation
  // labels sampled {friend .4, colleague .3, competitor .2, stranger .1}.
  const int group_count = (n + 9) / 10;
  std::vector<int> group(n);
  for (int i = 0; i < n; ++i) group[i] = i % group_count;
  const std::vector<double> relation_weights = {0.4, 0.3, 0.2, 0.1};
  const std::array<Relation, 4> relation_choices = {Relation::Friend, Relation::Colleague,
                                                    Relation::Competitor, Relation::Stranger};
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double p_edge = group[a] == group[b] ? 0.6 : 0.02;
      if (!rng.bernoulli(p_edge)) continue;
      SocialEdge e;
      e.a = a;
      e.b = b;
      e.relation = relation_choices[rng.pick_weighted(relation_weights)];
      s.graph.edges.push_back(e);
    }
  }

  validate_scenario(s);
  return s;
}

std::vector<HouseResource> apply_quality_variant(const std::vector<HouseResource>& resources,
                                                 QualityVariant variant) {
  if (variant == QualityVariant::S) return resources;
  std::vector<HouseResource> out;
  if (variant == QualityVariant::B) {
    out = resources;
    for (auto& h : out) h.bathroom = Bathroom::Shared;
    return out;
  }
  // H: split every house into two half-size, half-rent units. Total area and
  // unit rent are preserved; the second unit gets a fresh id.
  int next_id = 0;
  for (const auto& h : resources) next_id = std::max(next_id, h.id + 1);
  out.reserve(resources.size() * 2);
  for (const auto& h : resources) {
    HouseResource half = h;
    half.size = h.size / 2.0;
    half.rent = h.rent / 2.0;
    HouseResource twin = half;
    twin.id = next_id++;
    out.push_back(std::move(half));
    out.push_back(std::move(twin));
  }
  return out;
}

void validate_scenario(const Scenario& s) {
  std::vector<std::string> problems;
  if (s.participants.empty()) problems.push_back("participants: empty");
  if (s.resources.empty()) problems.push_back("resources: empty");

  std::set<int> pids;
  for (const auto& p : s.participants) {
    if (!pids.insert(p.id).second)
      problems.push_back("participants: duplicate id " + std::to_string(p.id));
    if (p.family_size < 1)
      problems.push_back("participant " + std::to_string(p.id) + ": family_size < 1");
    if (p.rent_budget < 0.0)
      problems.push_back("participant " + std::to_string(p.id) + ": rent_budget < 0");
    if (p.honesty < 0.0 || p.honesty > 1.0)
      problems.push_back("participant " + std::to_string(p.id) + ": honesty outside [0,1]");
    double sum = 0.0;
    for (const auto& [k, v] : p.feature_weights) sum += v;
    if (std::abs(sum - 1.0) > 1e-9)
      problems.push_back("participant " + std::to_string(p.id) + ": feature_weights sum != 1");
  }

  std::set<int> rids;
  for (const auto& h : s.resources) {
    if (!rids.insert(h.id).second)
      problems.push_back("resources: duplicate id " + std::to_string(h.id));
    if (h.size <= 0.0) problems.push_back("resource " + std::to_string(h.id) + ": size <= 0");
    if (h.rent < 0.0) problems.push_back("resource " + std::to_string(h.id) + ": rent < 0");
    if (!s.rating_table.covers(h))
      problems.push_back("resource " + std::to_string(h.id) + ": rating table does not cover it");
  }

  for (const auto& e : s.graph.edges) {
    if (e.a == e.b) problems.push_back("graph: self edge at " + std::to_string(e.a));
    if (!pids.count(e.a) || !pids.count(e.b))
      problems.push_back("graph: edge endpoint outside scenario (" + std::to_string(e.a) + "," +
                         std::to_string(e.b) + ")");
  }

  if (!problems.empty()) {
    std::string msg = "invalid scenario:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ValidationError(msg);
  }
}

}  // namespace allocsim
