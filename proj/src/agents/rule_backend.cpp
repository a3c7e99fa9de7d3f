#include "allocsim/agents/rule_backend.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace allocsim {

double relation_trust(Relation r) {
  switch (r) {
    case Relation::Friend: return 0.9;
    case Relation::Mate: return 0.9;
    case Relation::Colleague: return 0.6;
    case Relation::Stranger: return 0.4;
    case Relation::Competitor: return 0.2;
    case Relation::Enemy: return 0.1;
  }
  return 0.4;
}

namespace {

constexpr double kValueEps = 1e-6;

bool affordable(const ParticipantProfile& p, const HouseResource& r, double cap) {
  return r.rent <= p.rent_budget * cap;
}

// One step down the ladder toward open hostility.
Relation demote(Relation r) {
  switch (r) {
    case Relation::Friend: return Relation::Colleague;
    case Relation::Mate: return Relation::Colleague;
    case Relation::Colleague: return Relation::Stranger;
    case Relation::Stranger: return Relation::Competitor;
    case Relation::Competitor: return Relation::Competitor;
    case Relation::Enemy: return Relation::Enemy;
  }
  return r;
}

Relation promote(Relation r) {
  switch (r) {
    case Relation::Stranger: return Relation::Colleague;
    case Relation::Colleague: return Relation::Friend;
    default: return r;
  }
}

}  // namespace

RuleBackend::RuleBackend(const RatingTable& table, RuleParams params, uint64_t seed)
    : table_(table), params_(params), seed_(seed) {}

double RuleBackend::score(const ParticipantProfile& p, const HouseResource& r) {
  // Affordability bonus: full marks for free housing, zero at/over budget.
  if (p.rent_budget <= 0.0) return r.rent <= 0.0 ? 10.0 : 0.0;
  const double bonus = 10.0 * (1.0 - r.rent / p.rent_budget);
  return std::clamp(bonus, 0.0, 10.0);
}

int RuleBackend::select_queue(const ParticipantProfile& p,
                              const std::vector<QueueSummary>& queues,
                              const AgentMemory& memory) {
  (void)memory;
  if (queues.empty()) throw ValidationError("select_queue: no queue summaries");
  int best = 0;
  double best_u = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < queues.size(); ++i) {
    const auto& q = queues[i];
    double u;
    if (q.pool_count == 0 && q.pending_count == 0) {
      u = -std::numeric_limits<double>::infinity();
    } else {
      // Midpoint stand-in house; unknown features score a neutral 5.
      const double mid_size = (q.size_min + q.size_max) / 2.0;
      const double mid_rent = (q.rent_min + q.rent_max) / 2.0;
      double objective = 0.0;
      for (const auto& [feature, weight] : p.feature_weights) {
        double s = 5.0;
        if (feature == "size") s = table_.score_numeric("size", mid_size);
        if (feature == "rent") s = table_.score_numeric("rent", mid_rent);
        objective += weight * s;
      }
      double subjective = 0.0;
      if (p.rent_budget > 0.0)
        subjective = std::clamp(10.0 * (1.0 - mid_rent / p.rent_budget), 0.0, 10.0);
      u = objective + subjective;
    }
    if (u > best_u) {
      best_u = u;
      best = static_cast<int>(i);
    }
  }
  return best;
}

Decision RuleBackend::decide(const ParticipantProfile& p,
                             const std::vector<HouseResource>& visible,
                             const AgentMemory& memory,
                             const CompetitivenessReport& report,
                             const DecideContext& ctx) {
  (void)memory;
  (void)report;
  const HouseResource* best = nullptr;
  double best_u = -std::numeric_limits<double>::infinity();
  for (const auto& r : visible) {
    if (!affordable(p, r, params_.affordability_cap)) continue;
    const double u = score_resource(p, r, table_, *this).total;
    if (u > best_u || (u == best_u && best && r.id < best->id)) {
      best_u = u;
      best = &r;
    }
  }

  double best_pending = -std::numeric_limits<double>::infinity();
  for (const auto& r : ctx.pending) {
    if (!affordable(p, r, params_.affordability_cap)) continue;
    best_pending = std::max(best_pending, score_resource(p, r, table_, *this).total);
  }
  const bool pending_affordable = best_pending > -std::numeric_limits<double>::infinity();

  if (best == nullptr) {
    // Nothing visible (or nothing affordable): hold on only if supply is
    // still en route, otherwise leave the system.
    return ctx.supply_pending && pending_affordable ? Decision::decline() : Decision::quit();
  }
  if (best_u < params_.quit_threshold) {
    return pending_affordable && best_pending >= params_.quit_threshold ? Decision::decline()
                                                                        : Decision::quit();
  }
  // Patience: wait when a pending house still beats today's best after the
  // aspiration discount.
  if (ctx.supply_pending && pending_affordable &&
      best_pending * params_.aspiration_factor > best_u) {
    return Decision::decline();
  }
  return Decision::pick(best->id);
}

CommunicationPlan RuleBackend::plan(const ParticipantProfile& p,
                                    const AgentMemory& memory,
                                    const CompetitivenessReport& report,
                                    std::optional<int> listener_id,
                                    std::optional<Relation> listener_relation,
                                    int round) {
  (void)memory;
  CommunicationPlan out;
  out.listener_id = listener_id;
  if (listener_relation &&
      (*listener_relation == Relation::Competitor || *listener_relation == Relation::Enemy)) {
    out.intent = Intent::Withhold;
    out.goal = "reveal nothing useful";
    return out;
  }
  const bool contested = !report.global_uncontested && report.global_ratio < 1.0;
  if (contested) {
    Rng draw(hash_combine(seed_, hash_combine(static_cast<uint64_t>(round) * 1000003ULL +
                                                  static_cast<uint64_t>(p.id),
                                              listener_id ? static_cast<uint64_t>(*listener_id)
                                                          : 0xb10cULL)));
    if (draw.bernoulli(1.0 - p.honesty)) {
      out.intent = Intent::Deceptive;
      out.goal = "steer interest away from my own target";
      return out;
    }
  }
  out.intent = Intent::Honest;
  out.goal = "share what I know";
  return out;
}

Utterance RuleBackend::speak(const ParticipantProfile& p,
                             const CommunicationPlan& plan,
                             const std::vector<Utterance>& history,
                             const AgentMemory& memory,
                             const CompetitivenessReport& report,
                             const std::vector<HouseResource>& visible,
                             int round) {
  (void)history;
  (void)report;
  (void)round;
  Utterance out;
  out.speaker_id = p.id;
  out.listener_id = plan.listener_id;

  if (plan.intent == Intent::Withhold) {
    out.text = "Good luck with your search.";
    return out;
  }

  // The speaker's current favorite among visible affordable houses.
  const HouseResource* favorite = nullptr;
  double favorite_u = -std::numeric_limits<double>::infinity();
  const HouseResource* least = nullptr;
  double least_u = std::numeric_limits<double>::infinity();
  for (const auto& r : visible) {
    const double u = score_resource(p, r, table_, *this).total;
    if (u > favorite_u) {
      favorite_u = u;
      favorite = &r;
    }
    if (u < least_u) {
      least_u = u;
      least = &r;
    }
  }

  if (plan.intent == Intent::Deceptive) {
    // Praise the house the speaker wants least; never the favorite.
    if (least == nullptr || (favorite && least->id == favorite->id)) {
      out.text = "Good luck with your search.";
      return out;
    }
    Claim claim;
    claim.resource_id = least->id;
    claim.attribute = "rent";
    claim.value = least->rent * 0.8;  // flattering, known false
    claim.truthful = false;
    out.claims.push_back(claim);
    std::ostringstream text;
    text << "House " << least->id << " is a bargain, the rent is around "
         << static_cast<long long>(claim.value) << ".";
    out.text = text.str();
    return out;
  }

  // Honest: most recent trusted fact, preferring the favorite house.
  const MemoryEntry* fact = nullptr;
  if (favorite) {
    for (auto it = memory.trusted.rbegin(); it != memory.trusted.rend(); ++it) {
      if (it->resource_id == favorite->id) {
        fact = &*it;
        break;
      }
    }
  }
  if (!fact && !memory.trusted.empty()) fact = &memory.trusted.back();
  if (!fact) {
    out.text = "I have nothing new to share yet.";
    return out;
  }
  Claim claim;
  claim.resource_id = fact->resource_id;
  claim.attribute = fact->attribute;
  claim.value = fact->value;
  claim.truthful = true;
  out.claims.push_back(claim);
  std::ostringstream text;
  text << "House " << fact->resource_id << " has " << fact->attribute << " about "
       << static_cast<long long>(fact->value) << ".";
  out.text = text.str();
  return out;
}

void RuleBackend::assess(AgentMemory& memory,
                         const Utterance& incoming,
                         const ParticipantProfile& self,
                         int round) {
  (void)self;
  const MemorySource source =
      incoming.listener_id.has_value() ? MemorySource::PrivateMsg : MemorySource::Broadcast;
  double trust = relation_trust(Relation::Stranger);
  auto rel = memory.relations.find(incoming.speaker_id);
  if (rel != memory.relations.end()) trust = relation_trust(rel->second.relation);

  for (const auto& claim : incoming.claims) {
    MemoryEntry entry;
    entry.resource_id = claim.resource_id;
    entry.attribute = claim.attribute;
    entry.value = claim.value;
    entry.source = source;
    entry.from_participant = incoming.speaker_id;
    entry.round = round;

    // Everything lands in suspicious memory first.
    auto existing = memory.trusted_value(claim.resource_id, claim.attribute);
    const bool contradicts = existing && std::abs(*existing - claim.value) > kValueEps;
    if (contradicts) {
      entry.note = "contradicts trusted memory";
      memory.suspicious.push_back(entry);
    } else if (trust >= params_.trust_threshold) {
      memory.suspicious.push_back(entry);
      memory.trusted.push_back(entry);  // passed assessment
    } else {
      entry.note = "source below trust threshold";
      memory.suspicious.push_back(entry);
    }
    memory.short_term.push_back(entry);
  }
  reflect(memory, params_.reflection_threshold);
}

void RuleBackend::reflect(AgentMemory& memory, int threshold) {
  if (threshold < 1) throw ValidationError("reflect: threshold must be >= 1");
  if (static_cast<int>(memory.short_term.size()) <= threshold) return;
  // Latest-wins digest per (resource, attribute).
  std::map<std::pair<int, std::string>, double> digest;
  for (const auto& e : memory.short_term) digest[{e.resource_id, e.attribute}] = e.value;
  std::ostringstream summary;
  bool first = true;
  for (const auto& [key, value] : digest) {
    if (!first) summary << "; ";
    summary << "house " << key.first << " " << key.second << " ~" << value;
    first = false;
  }
  memory.long_term.push_back(summary.str());
  memory.short_term.clear();
}

void RuleBackend::evaluate_relation(AgentMemory& memory,
                                    int peer_id,
                                    const std::vector<Claim>& exchange) {
  if (exchange.empty()) return;
  auto& state = memory.relations[peer_id];
  bool lie_detected = false;
  for (const auto& claim : exchange) {
    auto trusted = memory.trusted_value(claim.resource_id, claim.attribute);
    if (trusted && std::abs(*trusted - claim.value) > kValueEps) lie_detected = true;
  }
  if (lie_detected) {
    state.relation = demote(state.relation);
    state.consistent_exchanges = 0;
    state.moral_note = "caught spreading false information";
    return;
  }
  ++state.consistent_exchanges;
  if (state.consistent_exchanges >= 2 &&
      (state.relation == Relation::Stranger || state.relation == Relation::Colleague)) {
    state.relation = promote(state.relation);
    state.consistent_exchanges = 0;
    state.moral_note = "has been consistently truthful";
  }
}

}  // namespace allocsim
