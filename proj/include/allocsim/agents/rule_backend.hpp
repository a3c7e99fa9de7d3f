#pragma once

#include "allocsim/agents/types.hpp"

namespace allocsim {

struct RuleParams {
  double quit_threshold = 2.0;     // leave when even the best house scores below this
  double affordability_cap = 1.2;  // rent tolerated up to cap * budget
  double aspiration_factor = 0.85; // decline when a pending house, discounted by
                                   // this factor, still beats the best visible one
  double trust_threshold = 0.5;    // relation score needed to promote a claim
  int reflection_threshold = 8;    // short-term entries tolerated before summarizing
  int forum_window = 10;           // latest posts read per topic
};

// Relation -> trust score used by memory assessment.
double relation_trust(Relation r);

// Deterministic reference behavior. Pure given (profile, inputs, seed): all
// randomness is derived by hashing (seed, round, speaker, listener), so call
// order and threading never change results.
class RuleBackend : public DecisionBackend {
 public:
  RuleBackend(const RatingTable& table, RuleParams params, uint64_t seed);

  int select_queue(const ParticipantProfile& p,
                   const std::vector<QueueSummary>& queues,
                   const AgentMemory& memory) override;

  Decision decide(const ParticipantProfile& p,
                  const std::vector<HouseResource>& visible,
                  const AgentMemory& memory,
                  const CompetitivenessReport& report,
                  const DecideContext& ctx) override;

  double score(const ParticipantProfile& p, const HouseResource& r) override;

  CommunicationPlan plan(const ParticipantProfile& p,
                         const AgentMemory& memory,
                         const CompetitivenessReport& report,
                         std::optional<int> listener_id,
                         std::optional<Relation> listener_relation,
                         int round) override;

  Utterance speak(const ParticipantProfile& p,
                  const CommunicationPlan& plan,
                  const std::vector<Utterance>& history,
                  const AgentMemory& memory,
                  const CompetitivenessReport& report,
                  const std::vector<HouseResource>& visible,
                  int round) override;

  void assess(AgentMemory& memory,
              const Utterance& incoming,
              const ParticipantProfile& self,
              int round) override;

  void reflect(AgentMemory& memory, int threshold) override;

  void evaluate_relation(AgentMemory& memory,
                         int peer_id,
                         const std::vector<Claim>& exchange) override;

  const RuleParams& params() const { return params_; }

 private:
  const RatingTable& table_;
  RuleParams params_;
  uint64_t seed_;
};

}  // namespace allocsim
