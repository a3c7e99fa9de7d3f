#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "allocsim/scenario.hpp"

namespace allocsim {

// A structured assertion about one resource attribute ("house 5 rents for
// 1200"). truthful records whether the speaker believed it when speaking.
struct Claim {
  int resource_id = 0;
  std::string attribute;  // "rent" | "size"
  double value = 0.0;
  bool truthful = true;
};

struct Utterance {
  int speaker_id = 0;
  std::optional<int> listener_id;  // empty for broadcasts
  std::optional<int> topic;        // community id, broadcasts only
  std::string text;
  std::vector<Claim> claims;
};

enum class Intent { Honest, Deceptive, Withhold };
std::string to_string(Intent v);

struct CommunicationPlan {
  Intent intent = Intent::Honest;
  std::optional<int> listener_id;  // empty when planning a broadcast
  std::string goal;
};

enum class MemorySource { Policymaker, Broadcast, PrivateMsg, Self };
std::string to_string(MemorySource v);

struct MemoryEntry {
  int resource_id = 0;
  std::string attribute;
  double value = 0.0;
  MemorySource source = MemorySource::Self;
  int from_participant = -1;  // -1 for policymaker/self
  int round = 0;
  std::string note;  // e.g. the reason a claim stayed suspicious
};

struct RelationState {
  Relation relation = Relation::Stranger;
  std::string relation_note;  // s^R
  std::string moral_note;     // s^E
  int consistent_exchanges = 0;
};

struct AgentMemory {
  std::vector<MemoryEntry> trusted;     // m^T
  std::vector<MemoryEntry> suspicious;  // m^S
  std::vector<MemoryEntry> short_term;
  std::vector<std::string> long_term;
  std::map<int, RelationState> relations;

  // Latest trusted value for (resource, attribute), if any.
  std::optional<double> trusted_value(int resource_id, const std::string& attribute) const;
};

struct Decision {
  enum class Kind { Pick, Decline, Quit };
  Kind kind = Kind::Quit;
  int resource_id = -1;  // Pick only

  static Decision pick(int rid) { return {Kind::Pick, rid}; }
  static Decision decline() { return {Kind::Decline, -1}; }
  static Decision quit() { return {Kind::Quit, -1}; }
};

// What a participant is shown about one queue before choosing it.
struct QueueSummary {
  int queue_id = 0;
  int pool_count = 0;
  int pending_count = 0;  // destined for this queue, not yet admitted
  double size_min = 0.0, size_max = 0.0;
  double rent_min = 0.0, rent_max = 0.0;
  int waiting_count = 0;
  int selection_count = 0;
};

// Scarcity description E_d broadcast to every participant.
struct QueueCompetitiveness {
  int queue_id = 0;
  int pool_count = 0;
  int pending_count = 0;
  std::map<std::string, int> size_band_counts;  // rating-table size buckets
  int waiting_count = 0;
  int selection_count = 0;
  double ratio = 0.0;  // pool / waiting participants
  bool uncontested = false;
};

struct CompetitivenessReport {
  std::vector<QueueCompetitiveness> queues;
  double global_ratio = 0.0;
  bool global_uncontested = false;
  std::string text;  // one paragraph, mentions each queue exactly once

  const QueueCompetitiveness* queue(int queue_id) const;
};

// Engine-provided context for one selection-queue decision.
struct DecideContext {
  int round = 0;
  int queue_id = 0;
  bool supply_pending = false;               // resources still en route to this queue
  std::vector<HouseResource> pending;        // their disclosed listings
};

struct Scored {
  double objective = 0.0;   // U_o: weighted rating-table score
  double subjective = 0.0;  // U_s: backend-provided rating
  double total = 0.0;       // U = U_o + U_s (outer weight fixed to 1)
};

// Participant behavior contract. RuleBackend is pure given (profile, inputs,
// seed); LlmBackend is non-deterministic and never enters oracle tests.
class DecisionBackend {
 public:
  virtual ~DecisionBackend() = default;

  virtual int select_queue(const ParticipantProfile& p,
                           const std::vector<QueueSummary>& queues,
                           const AgentMemory& memory) = 0;

  virtual Decision decide(const ParticipantProfile& p,
                          const std::vector<HouseResource>& visible,
                          const AgentMemory& memory,
                          const CompetitivenessReport& report,
                          const DecideContext& ctx) = 0;

  // Subjective satisfaction U_s in [0, 10].
  virtual double score(const ParticipantProfile& p, const HouseResource& r) = 0;

  virtual CommunicationPlan plan(const ParticipantProfile& p,
                                 const AgentMemory& memory,
                                 const CompetitivenessReport& report,
                                 std::optional<int> listener_id,
                                 std::optional<Relation> listener_relation,
                                 int round) = 0;

  virtual Utterance speak(const ParticipantProfile& p,
                          const CommunicationPlan& plan,
                          const std::vector<Utterance>& history,
                          const AgentMemory& memory,
                          const CompetitivenessReport& report,
                          const std::vector<HouseResource>& visible,
                          int round) = 0;

  virtual void assess(AgentMemory& memory,
                      const Utterance& incoming,
                      const ParticipantProfile& self,
                      int round) = 0;

  virtual void reflect(AgentMemory& memory, int threshold) = 0;

  virtual void evaluate_relation(AgentMemory& memory,
                                 int peer_id,
                                 const std::vector<Claim>& exchange) = 0;
};

// U_o from the rating table and the profile's feature weights, U_s from the
// backend. Throws ValidationError naming any uncovered feature value.
Scored score_resource(const ParticipantProfile& p,
                      const HouseResource& r,
                      const RatingTable& table,
                      DecisionBackend& backend);

}  // namespace allocsim
