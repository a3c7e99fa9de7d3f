#pragma once

#include "allocsim/agents/prompts.hpp"
#include "allocsim/agents/rule_backend.hpp"
#include "allocsim/agents/types.hpp"

namespace allocsim {

// Chat-completion-backed participant behavior. Renders the shipped templates,
// sends them through the transport, and parses the structured replies. After
// max_retries parse/transport failures the call falls back to the rule
// behavior (decisions) or a withheld utterance (speech), and the failure is
// counted. Non-deterministic; excluded from every oracle and determinism test.
class LlmBackend : public DecisionBackend {
 public:
  LlmBackend(const RatingTable& table, RuleParams rule_params, uint64_t seed,
             CompletionFn transport, int max_retries = 3);

  static LlmBackend from_env(const RatingTable& table, RuleParams rule_params, uint64_t seed);

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

  int fallback_count() const { return fallbacks_; }
  int call_count() const { return calls_; }

 private:
  // One completion attempt loop: render, send, parse; empty on failure.
  std::optional<ParsedReply> complete_parsed(PromptTemplate t,
                                             const std::map<std::string, std::string>& context);

  RuleBackend fallback_;
  CompletionFn transport_;
  int max_retries_;
  int fallbacks_ = 0;
  int calls_ = 0;
};

}  // namespace allocsim
