#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "allocsim/agents/types.hpp"
#include "allocsim/outcome.hpp"
#include "allocsim/policy.hpp"
#include "allocsim/rng.hpp"
#include "allocsim/scenario.hpp"

namespace allocsim {

struct SelectionEntry {
  int participant_id = 0;
  int remaining_choices = 0;  // in [0, k]
  int joined_round = 0;
};

struct QueueState {
  int queue_id = 0;
  std::vector<int> waiting;               // participant ids, sorted per policy
  std::vector<SelectionEntry> selection;  // head decides this round
  std::vector<int> pool;                  // remaining resource ids
};

enum class VulnerableMode { VFA, VFR };

// Bottom ceil(fraction * n) by per-capita budget, ties by ascending id.
// VFA/VFR timing (cache once vs. recompute per round) lives in Simulation.
std::set<int> designate_vulnerable(const std::vector<ParticipantProfile>& eligible,
                                   double fraction);

// Disjoint covering partition of resource ids into m queue pools. size/rent
// sort ascending by the key and carve contiguous blocks, queue i getting
// floor(weight_i * |R|) (remainder to the last queue); the lowest block lands
// in the lowest-band queue (index m-1, entry bands run high to low from 0).
// random shuffles with the rng, then carves the same way.
std::vector<std::vector<int>> partition_resources(const std::vector<HouseResource>& resources,
                                                  ResourceRule rule,
                                                  const std::vector<double>& queue_weights,
                                                  Rng& rng);

// FIFO: stable by (entry_round, id). VFA/VFR: vulnerable ids first, FIFO
// order within each group.
std::vector<int> sort_queue(const std::vector<int>& waiting,
                            SortRule rule,
                            const std::set<int>& vulnerable,
                            const std::map<int, int>& entry_rounds);

CompetitivenessReport compute_competitiveness(
    const std::vector<QueueState>& queues,
    const std::map<int, int>& pending_per_queue,
    const std::function<const HouseResource&(int)>& resource_by_id,
    const RatingTable& table);

// --- per-round trace -------------------------------------------------------

struct DecisionEvent {
  int queue_id = 0;
  int participant_id = 0;
  std::string action;  // pick | decline | to_waiting | quit | skip
  std::optional<int> resource_id;
  double utility = 0.0;
};

struct MessageEvent {
  Utterance utterance;
  std::string intent;
};

struct QueueRoundLog {
  int queue_id = 0;
  std::vector<int> pool;            // after this round's admissions
  std::vector<int> waiting_sorted;  // before promotion
  std::vector<int> promoted;        // in promotion order
  std::vector<SelectionEntry> selection_after;
  int capacity = 0;  // ceil(c * |pool|) at promotion time
};

struct RoundLog {
  int round = 0;
  std::vector<int> admitted_participants;
  std::vector<int> admitted_resources;
  std::set<int> vulnerable;  // active designation this round (empty under FIFO)
  std::vector<QueueRoundLog> queues;
  std::vector<DecisionEvent> decisions;
  std::vector<MessageEvent> messages;
};

struct SimulationTrace {
  uint64_t seed = 0;
  std::vector<RoundLog> rounds;
  AllocationOutcome outcome;
};

struct SimulationConfig {
  int max_rounds = 200;
  double vulnerable_fraction = 0.2;
  bool parallel_messaging = false;  // must produce the identical trace
  bool social_enabled = true;
  int forum_window = 10;  // latest unread posts assessed per round
};

// Round-based allocation process. The loop is sequential and single-owner;
// within the social phase, message generation for disjoint graph components
// may run concurrently and is merged in ascending speaker id, so the trace is
// independent of scheduling.
class Simulation {
 public:
  Simulation(const Scenario& scenario, const Policy& policy, DecisionBackend& backend,
             uint64_t seed, SimulationConfig config = {});

  bool finished() const;
  void step_round();
  // Runs to completion and hands over the trace.
  SimulationTrace run();

  int round() const { return round_; }
  const std::vector<QueueState>& queues() const { return queues_; }
  const AllocationOutcome& outcome() const { return outcome_; }
  const std::set<int>& active_vulnerable() const { return vulnerable_; }
  const std::vector<Utterance>& forum() const { return forum_; }

 private:
  struct ParticipantState {
    bool admitted = false;
    int queue = -1;
    int first_seen_round = -1;  // admission round
    bool allocated = false;
    bool quit = false;
    AgentMemory memory;
    std::vector<Utterance> exchange_log;  // private messages in/out
    size_t forum_cursor = 0;
    bool resolved() const { return allocated || quit; }
  };

  void admit_resources(RoundLog& log);
  void admit_participants(RoundLog& log);
  void refresh_vulnerable();
  void sort_and_promote(RoundLog& log);
  void run_decisions(RoundLog& log);
  void social_phase(RoundLog& log);

  std::vector<QueueSummary> queue_summaries() const;
  CompetitivenessReport competitiveness() const;
  std::map<int, int> pending_per_queue() const;
  std::vector<HouseResource> pool_resources(int queue_id) const;
  std::vector<HouseResource> pending_resources(int queue_id) const;
  void seed_policymaker_memory(int participant_id);
  void resolve_allocation(int queue_id, int participant_id, int resource_id, RoundLog& log);
  void finalize_outcome();

  const Scenario& scenario_;
  Policy policy_;
  DecisionBackend& backend_;
  uint64_t seed_;
  SimulationConfig config_;
  Rng rng_;

  std::vector<QueueState> queues_;
  std::map<int, ParticipantState> pstate_;
  std::map<int, int> resource_queue_;     // frozen initial partition bands
  std::map<int, bool> resource_admitted_;
  std::map<int, int> entry_band_;        // precomputed rent/family bands
  std::map<int, int> entry_rounds_;
  std::set<int> vulnerable_;             // active designation (VFA cached)
  std::vector<Utterance> forum_;
  AllocationOutcome outcome_;
  std::vector<RoundLog> log_;
  int round_ = 0;
  bool done_ = false;
};

SimulationTrace run_simulation(const Scenario& scenario, const Policy& policy,
                               DecisionBackend& backend, uint64_t seed, int max_rounds,
                               SimulationConfig config = {});

}  // namespace allocsim
