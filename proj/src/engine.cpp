#include "allocsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>

namespace allocsim {

std::set<int> designate_vulnerable(const std::vector<ParticipantProfile>& eligible,
                                   double fraction) {
  if (fraction <= 0.0 || fraction >= 1.0)
    throw ValidationError("vulnerable fraction must be in (0,1)");
  if (eligible.empty()) return {};
  std::vector<const ParticipantProfile*> sorted;
  sorted.reserve(eligible.size());
  for (const auto& p : eligible) sorted.push_back(&p);
  std::sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) {
    const double pa = per_capita_budget(*a), pb = per_capita_budget(*b);
    if (pa != pb) return pa < pb;
    return a->id < b->id;
  });
  const size_t count = static_cast<size_t>(
      std::ceil(fraction * static_cast<double>(eligible.size())));
  std::set<int> out;
  for (size_t i = 0; i < count && i < sorted.size(); ++i) out.insert(sorted[i]->id);
  return out;
}

std::vector<std::vector<int>> partition_resources(const std::vector<HouseResource>& resources,
                                                  ResourceRule rule,
                                                  const std::vector<double>& queue_weights,
                                                  Rng& rng) {
  const int m = static_cast<int>(queue_weights.size());
  if (m < 1) throw ValidationError("partition_resources: no queue weights");
  double sum = 0.0;
  for (double w : queue_weights) sum += w;
  if (std::abs(sum - 1.0) > 1e-9)
    throw ValidationError("partition_resources: weights must sum to 1");

  std::vector<int> order;
  order.reserve(resources.size());
  for (const auto& r : resources) order.push_back(r.id);

  if (rule == ResourceRule::Random) {
    rng.shuffle(order);
  } else {
    std::map<int, double> key;
    for (const auto& r : resources) key[r.id] = rule == ResourceRule::Size ? r.size : r.rent;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (key[a] != key[b]) return key[a] < key[b];
      return a < b;
    });
  }

  // Block sizes by queue index; the last queue absorbs the remainder.
  const int total = static_cast<int>(order.size());
  std::vector<int> block(m, 0);
  int assigned = 0;
  for (int i = 0; i < m - 1; ++i) {
    block[i] = static_cast<int>(std::floor(queue_weights[i] * total));
    assigned += block[i];
  }
  block[m - 1] = total - assigned;

  // Ascending-key blocks are handed out from the lowest entry band (queue
  // m-1) upward, so each participant band sees matching resources.
  std::vector<std::vector<int>> pools(m);
  int cursor = 0;
  for (int q = m - 1; q >= 0; --q) {
    for (int i = 0; i < block[q]; ++i) pools[q].push_back(order[cursor++]);
  }
  return pools;
}

std::vector<int> sort_queue(const std::vector<int>& waiting,
                            SortRule rule,
                            const std::set<int>& vulnerable,
                            const std::map<int, int>& entry_rounds) {
  std::vector<int> out = waiting;
  auto fifo_less = [&](int a, int b) {
    const int ra = entry_rounds.count(a) ? entry_rounds.at(a) : 0;
    const int rb = entry_rounds.count(b) ? entry_rounds.at(b) : 0;
    if (ra != rb) return ra < rb;
    return a < b;
  };
  if (rule == SortRule::Fifo) {
    std::sort(out.begin(), out.end(), fifo_less);
    return out;
  }
  std::sort(out.begin(), out.end(), [&](int a, int b) {
    const bool va = vulnerable.count(a) > 0, vb = vulnerable.count(b) > 0;
    if (va != vb) return va;
    return fifo_less(a, b);
  });
  return out;
}

namespace {

std::string size_band_label(const std::vector<RatingTable::NumericBucket>& buckets, size_t idx) {
  std::ostringstream os;
  const double upper = buckets[idx].upper;
  if (idx == 0) {
    os << "<" << upper << " m2";
  } else if (std::isinf(upper)) {
    os << ">=" << buckets[idx - 1].upper << " m2";
  } else {
    os << buckets[idx - 1].upper << "-" << upper << " m2";
  }
  return os.str();
}

}  // namespace

CompetitivenessReport compute_competitiveness(
    const std::vector<QueueState>& queues,
    const std::map<int, int>& pending_per_queue,
    const std::function<const HouseResource&(int)>& resource_by_id,
    const RatingTable& table) {
  CompetitivenessReport report;
  const auto& size_buckets = table.numeric().at("size");
  int total_pool = 0, total_waiting = 0;
  std::ostringstream text;
  for (const auto& q : queues) {
    QueueCompetitiveness qc;
    qc.queue_id = q.queue_id;
    qc.pool_count = static_cast<int>(q.pool.size());
    auto pending = pending_per_queue.find(q.queue_id);
    qc.pending_count = pending == pending_per_queue.end() ? 0 : pending->second;
    qc.waiting_count = static_cast<int>(q.waiting.size());
    qc.selection_count = static_cast<int>(q.selection.size());
    for (int rid : q.pool) {
      const auto& r = resource_by_id(rid);
      const size_t idx = static_cast<size_t>(table.bucket_index("size", r.size));
      ++qc.size_band_counts[size_band_label(size_buckets, idx)];
    }
    qc.uncontested = qc.waiting_count == 0;
    qc.ratio = qc.uncontested ? std::numeric_limits<double>::infinity()
                              : static_cast<double>(qc.pool_count) / qc.waiting_count;
    total_pool += qc.pool_count;
    total_waiting += qc.waiting_count;

    text << "Queue " << qc.queue_id << ": " << qc.pool_count << " resources (";
    bool first = true;
    for (const auto& [band, count] : qc.size_band_counts) {
      if (!first) text << ", ";
      text << count << " of " << band;
      first = false;
    }
    if (qc.size_band_counts.empty()) text << "none";
    text << "), " << qc.waiting_count << " waiting, " << qc.selection_count << " selecting";
    if (qc.uncontested) {
      text << "; uncontested.";
    } else {
      text << "; " << qc.ratio << " resources per waiting participant.";
    }
    text << " ";
    report.queues.push_back(std::move(qc));
  }
  report.global_uncontested = total_waiting == 0;
  report.global_ratio = report.global_uncontested
                            ? std::numeric_limits<double>::infinity()
                            : static_cast<double>(total_pool) / total_waiting;
  report.text = text.str();
  return report;
}

Simulation::Simulation(const Scenario& scenario, const Policy& policy, DecisionBackend& backend,
                       uint64_t seed, SimulationConfig config)
    : scenario_(scenario),
      policy_(policy),
      backend_(backend),
      seed_(seed),
      config_(config),
      rng_(hash_combine(seed, 0xE46193EULL)) {
  validate_scenario(scenario_);
  validate_policy(policy_);
  if (config_.max_rounds < 1) throw ValidationError("max_rounds must be >= 1");

  queues_.resize(static_cast<size_t>(policy_.m));
  for (int q = 0; q < policy_.m; ++q) queues_[static_cast<size_t>(q)].queue_id = q;

  // Frozen bands: the full inventory is partitioned once; admission later
  // just activates a resource into its precomputed pool.
  auto pools = partition_resources(scenario_.resources, policy_.resource_rule,
                                   policy_.proportions, rng_);
  for (int q = 0; q < policy_.m; ++q) {
    for (int rid : pools[static_cast<size_t>(q)]) resource_queue_[rid] = q;
  }
  for (const auto& r : scenario_.resources) resource_admitted_[r.id] = false;

  // Rank-based entry bands over the whole scenario, high band = queue 0.
  if (policy_.entry_rule == EntryRule::Rent || policy_.entry_rule == EntryRule::Family) {
    std::vector<int> ids;
    for (const auto& p : scenario_.participants) ids.push_back(p.id);
    std::sort(ids.begin(), ids.end(), [&](int a, int b) {
      const auto& pa = scenario_.participant(a);
      const auto& pb = scenario_.participant(b);
      const double ka = policy_.entry_rule == EntryRule::Rent
                            ? pa.rent_budget
                            : static_cast<double>(pa.family_size);
      const double kb = policy_.entry_rule == EntryRule::Rent
                            ? pb.rent_budget
                            : static_cast<double>(pb.family_size);
      if (ka != kb) return ka > kb;
      return a < b;
    });
    const int n = static_cast<int>(ids.size());
    double cumulative = 0.0;
    int start = 0;
    for (int q = 0; q < policy_.m; ++q) {
      cumulative += policy_.proportions[static_cast<size_t>(q)];
      const int end = q == policy_.m - 1
                          ? n
                          : static_cast<int>(std::floor(cumulative * n));
      for (int i = start; i < end && i < n; ++i) entry_band_[ids[static_cast<size_t>(i)]] = q;
      start = std::max(start, end);
    }
    // Guard against floor collapse on tiny n.
    for (int id : ids) {
      if (!entry_band_.count(id)) entry_band_[id] = policy_.m - 1;
    }
  }

  for (const auto& p : scenario_.participants) {
    entry_rounds_[p.id] = p.entry_round;
    pstate_[p.id] = ParticipantState{};
  }

  if (policy_.sort_rule == SortRule::Vfa) {
    vulnerable_ = designate_vulnerable(scenario_.participants, config_.vulnerable_fraction);
  }
}

std::map<int, int> Simulation::pending_per_queue() const {
  std::map<int, int> pending;
  for (int q = 0; q < policy_.m; ++q) pending[q] = 0;
  for (const auto& [rid, admitted] : resource_admitted_) {
    if (!admitted) ++pending[resource_queue_.at(rid)];
  }
  return pending;
}

std::vector<HouseResource> Simulation::pool_resources(int queue_id) const {
  std::vector<HouseResource> out;
  for (int rid : queues_[static_cast<size_t>(queue_id)].pool)
    out.push_back(scenario_.resource(rid));
  return out;
}

std::vector<HouseResource> Simulation::pending_resources(int queue_id) const {
  std::vector<HouseResource> out;
  for (const auto& [rid, admitted] : resource_admitted_) {
    if (!admitted && resource_queue_.at(rid) == queue_id) out.push_back(scenario_.resource(rid));
  }
  return out;
}

std::vector<QueueSummary> Simulation::queue_summaries() const {
  const auto pending = pending_per_queue();
  std::vector<QueueSummary> out;
  for (const auto& q : queues_) {
    QueueSummary s;
    s.queue_id = q.queue_id;
    s.pool_count = static_cast<int>(q.pool.size());
    s.pending_count = pending.at(q.queue_id);
    s.waiting_count = static_cast<int>(q.waiting.size());
    s.selection_count = static_cast<int>(q.selection.size());
    bool first = true;
    auto absorb = [&](const HouseResource& r) {
      if (first) {
        s.size_min = s.size_max = r.size;
        s.rent_min = s.rent_max = r.rent;
        first = false;
      } else {
        s.size_min = std::min(s.size_min, r.size);
        s.size_max = std::max(s.size_max, r.size);
        s.rent_min = std::min(s.rent_min, r.rent);
        s.rent_max = std::max(s.rent_max, r.rent);
      }
    };
    for (int rid : q.pool) absorb(scenario_.resource(rid));
    for (const auto& r : pending_resources(q.queue_id)) absorb(r);
    out.push_back(s);
  }
  return out;
}

CompetitivenessReport Simulation::competitiveness() const {
  return compute_competitiveness(
      queues_, pending_per_queue(),
      [this](int rid) -> const HouseResource& { return scenario_.resource(rid); },
      scenario_.rating_table);
}

void Simulation::seed_policymaker_memory(int participant_id) {
  auto& state = pstate_.at(participant_id);
  const int q = state.queue;
  for (const auto& [rid, destined_queue] : resource_queue_) {
    if (destined_queue != q) continue;
    const auto& r = scenario_.resource(rid);
    MemoryEntry rent_entry{rid, "rent", r.rent, MemorySource::Policymaker, -1, round_, ""};
    MemoryEntry size_entry{rid, "size", r.size, MemorySource::Policymaker, -1, round_, ""};
    state.memory.trusted.push_back(rent_entry);
    state.memory.trusted.push_back(size_entry);
  }
  // Social ties seed the relation ledger.
  for (int neighbor : scenario_.graph.neighbors(participant_id)) {
    auto relation = scenario_.graph.relation_between(participant_id, neighbor);
    if (relation) {
      RelationState rs;
      rs.relation = *relation;
      state.memory.relations[neighbor] = rs;
    }
  }
}

void Simulation::admit_resources(RoundLog& log) {
  std::vector<int> candidates;
  for (const auto& r : scenario_.resources) {
    if (!resource_admitted_.at(r.id) && r.entry_round <= round_) candidates.push_back(r.id);
  }
  std::sort(candidates.begin(), candidates.end(), [&](int a, int b) {
    const int ra = scenario_.resource(a).entry_round, rb = scenario_.resource(b).entry_round;
    if (ra != rb) return ra < rb;
    return a < b;
  });
  int admitted = 0;
  for (int rid : candidates) {
    if (admitted >= policy_.batch_r) break;
    resource_admitted_[rid] = true;
    queues_[static_cast<size_t>(resource_queue_.at(rid))].pool.push_back(rid);
    log.admitted_resources.push_back(rid);
    ++admitted;
  }
}

void Simulation::admit_participants(RoundLog& log) {
  std::vector<int> candidates;
  for (const auto& p : scenario_.participants) {
    const auto& state = pstate_.at(p.id);
    if (!state.admitted && !state.resolved() && p.entry_round <= round_)
      candidates.push_back(p.id);
  }
  std::sort(candidates.begin(), candidates.end(), [&](int a, int b) {
    const int ra = entry_rounds_.at(a), rb = entry_rounds_.at(b);
    if (ra != rb) return ra < rb;
    return a < b;
  });
  const auto summaries = queue_summaries();
  int admitted = 0;
  for (int pid : candidates) {
    if (admitted >= policy_.batch_p) break;
    ++admitted;  // each attempt consumes an intake slot
    const auto& profile = scenario_.participant(pid);
    auto& state = pstate_.at(pid);
    int q = -1;
    switch (policy_.entry_rule) {
      case EntryRule::Rent:
      case EntryRule::Family:
        q = entry_band_.at(pid);
        break;
      case EntryRule::Random:
        q = rng_.uniform_int(0, policy_.m - 1);
        break;
      case EntryRule::Select:
        try {
          q = backend_.select_queue(profile, summaries, state.memory);
        } catch (const std::exception&) {
          // Backend failure: deferred one round, retried on the next intake.
          continue;
        }
        break;
    }
    if (q < 0 || q >= policy_.m) q = policy_.m - 1;
    state.admitted = true;
    state.queue = q;
    queues_[static_cast<size_t>(q)].waiting.push_back(pid);
    seed_policymaker_memory(pid);
    log.admitted_participants.push_back(pid);
  }
}

void Simulation::refresh_vulnerable() {
  if (policy_.sort_rule != SortRule::Vfr) return;
  std::vector<ParticipantProfile> present;
  for (const auto& p : scenario_.participants) {
    const auto& state = pstate_.at(p.id);
    if (state.admitted && !state.resolved()) present.push_back(p);
  }
  vulnerable_ = present.empty()
                    ? std::set<int>{}
                    : designate_vulnerable(present, config_.vulnerable_fraction);
}

void Simulation::sort_and_promote(RoundLog& log) {
  for (auto& q : queues_) {
    q.waiting = sort_queue(q.waiting, policy_.sort_rule, vulnerable_, entry_rounds_);
    QueueRoundLog ql;
    ql.queue_id = q.queue_id;
    ql.pool = q.pool;
    ql.waiting_sorted = q.waiting;
    ql.capacity = static_cast<int>(std::ceil(policy_.c * static_cast<double>(q.pool.size())));
    while (static_cast<int>(q.selection.size()) < ql.capacity && !q.waiting.empty()) {
      const int pid = q.waiting.front();
      q.waiting.erase(q.waiting.begin());
      q.selection.push_back({pid, policy_.k, round_});
      ql.promoted.push_back(pid);
    }
    ql.selection_after = q.selection;
    log.queues.push_back(std::move(ql));
  }
}

void Simulation::resolve_allocation(int queue_id, int participant_id, int resource_id,
                                    RoundLog& log) {
  auto& q = queues_[static_cast<size_t>(queue_id)];
  q.pool.erase(std::remove(q.pool.begin(), q.pool.end(), resource_id), q.pool.end());
  auto& state = pstate_.at(participant_id);
  state.allocated = true;
  const auto& profile = scenario_.participant(participant_id);
  const auto& resource = scenario_.resource(resource_id);
  const double utility = score_resource(profile, resource, scenario_.rating_table, backend_).total;
  outcome_.assignment[participant_id] = resource_id;
  outcome_.wait_rounds[participant_id] = std::max(0, round_ - profile.entry_round);
  outcome_.satisfaction[participant_id] = utility;
  // The viewing: undisclosed detail becomes first-hand trusted memory.
  MemoryEntry reveal{resource_id, "undisclosed", 0.0, MemorySource::Self, -1, round_,
                     resource.undisclosed};
  state.memory.trusted.push_back(reveal);
  DecisionEvent ev;
  ev.queue_id = queue_id;
  ev.participant_id = participant_id;
  ev.action = "pick";
  ev.resource_id = resource_id;
  ev.utility = utility;
  log.decisions.push_back(ev);
}

void Simulation::run_decisions(RoundLog& log) {
  const auto report = competitiveness();
  const auto pending = pending_per_queue();
  for (auto& q : queues_) {
    if (q.selection.empty()) continue;
    SelectionEntry head = q.selection.front();
    const auto& profile = scenario_.participant(head.participant_id);
    auto& state = pstate_.at(head.participant_id);
    DecideContext ctx;
    ctx.round = round_;
    ctx.queue_id = q.queue_id;
    ctx.supply_pending = pending.at(q.queue_id) > 0;
    ctx.pending = pending_resources(q.queue_id);
    Decision decision;
    try {
      decision = backend_.decide(profile, pool_resources(q.queue_id), state.memory, report, ctx);
    } catch (const std::exception&) {
      DecisionEvent ev;
      ev.queue_id = q.queue_id;
      ev.participant_id = head.participant_id;
      ev.action = "skip";
      log.decisions.push_back(ev);
      continue;
    }

    switch (decision.kind) {
      case Decision::Kind::Pick: {
        const bool in_pool =
            std::find(q.pool.begin(), q.pool.end(), decision.resource_id) != q.pool.end();
        if (!in_pool) {  // backend picked outside its visible pool
          DecisionEvent ev;
          ev.queue_id = q.queue_id;
          ev.participant_id = head.participant_id;
          ev.action = "skip";
          log.decisions.push_back(ev);
          break;
        }
        q.selection.erase(q.selection.begin());
        resolve_allocation(q.queue_id, head.participant_id, decision.resource_id, log);
        break;
      }
      case Decision::Kind::Decline: {
        q.selection.erase(q.selection.begin());
        head.remaining_choices -= 1;
        DecisionEvent ev;
        ev.queue_id = q.queue_id;
        ev.participant_id = head.participant_id;
        if (head.remaining_choices > 0) {
          q.selection.push_back(head);  // rotate to the selection tail
          ev.action = "decline";
        } else {
          q.waiting.push_back(head.participant_id);  // choices exhausted
          ev.action = "to_waiting";
        }
        log.decisions.push_back(ev);
        break;
      }
      case Decision::Kind::Quit: {
        q.selection.erase(q.selection.begin());
        state.quit = true;
        outcome_.quit.insert(head.participant_id);
        outcome_.wait_rounds[head.participant_id] =
            std::max(0, round_ - profile.entry_round);
        outcome_.satisfaction[head.participant_id] = 0.0;
        DecisionEvent ev;
        ev.queue_id = q.queue_id;
        ev.participant_id = head.participant_id;
        ev.action = "quit";
        log.decisions.push_back(ev);
        break;
      }
    }
  }
}

void Simulation::social_phase(RoundLog& log) {
  if (!config_.social_enabled) return;
  const auto report = competitiveness();

  std::vector<int> present;
  for (const auto& p : scenario_.participants) {
    const auto& state = pstate_.at(p.id);
    if (state.admitted && !state.resolved()) present.push_back(p.id);
  }

  struct Generated {
    int speaker;
    bool broadcast;
    CommunicationPlan plan;
    Utterance utterance;
  };

  auto generate_for = [&](int pid) {
    std::vector<Generated> out;
    const auto& profile = scenario_.participant(pid);
    const auto& state = pstate_.at(pid);
    const auto visible = pool_resources(state.queue);

    // One broadcast on the admission round.
    if (round_ == state.first_seen_round) {
      auto plan = backend_.plan(profile, state.memory, report, std::nullopt, std::nullopt, round_);
      auto utt = backend_.speak(profile, plan, {}, state.memory, report, visible, round_);
      utt.listener_id.reset();
      if (!utt.topic) {
        int topic = 0;
        if (!utt.claims.empty()) {
          topic = scenario_.resource(utt.claims.front().resource_id).community_id;
        } else if (!visible.empty()) {
          topic = visible.front().community_id;
        }
        utt.topic = topic;
      }
      out.push_back({pid, true, plan, utt});
    }

    // One private message per round to a rotating neighbor.
    const auto neighbors = scenario_.graph.neighbors(pid);
    if (!neighbors.empty()) {
      const int listener =
          neighbors[static_cast<size_t>((round_ + pid) % static_cast<int>(neighbors.size()))];
      std::optional<Relation> relation;
      auto rel_it = state.memory.relations.find(listener);
      if (rel_it != state.memory.relations.end()) relation = rel_it->second.relation;
      auto plan = backend_.plan(profile, state.memory, report, listener, relation, round_);
      std::vector<Utterance> history;
      for (const auto& u : state.exchange_log) {
        if (u.speaker_id == listener || (u.listener_id && *u.listener_id == listener))
          history.push_back(u);
      }
      if (history.size() > 4) history.erase(history.begin(), history.end() - 4);
      auto utt = backend_.speak(profile, plan, history, state.memory, report, visible, round_);
      utt.listener_id = listener;
      utt.topic.reset();
      out.push_back({pid, false, plan, utt});
    }
    return out;
  };

  std::vector<Generated> generated;
  if (config_.parallel_messaging) {
    // Disjoint social components run concurrently; the merge below is in
    // ascending speaker id, so scheduling cannot change the trace.
    const auto components = scenario_.graph.components(present);
    std::set<int> connected;
    for (const auto& comp : components)
      for (int id : comp) connected.insert(id);
    std::vector<std::vector<int>> units = components;
    for (int pid : present) {
      if (!connected.count(pid)) units.push_back({pid});
    }
    std::vector<std::future<std::vector<Generated>>> futures;
    for (const auto& unit : units) {
      futures.push_back(std::async(std::launch::async, [&, unit]() {
        std::vector<Generated> local;
        for (int pid : unit) {
          auto items = generate_for(pid);
          local.insert(local.end(), items.begin(), items.end());
        }
        return local;
      }));
    }
    for (auto& f : futures) {
      auto items = f.get();
      generated.insert(generated.end(), items.begin(), items.end());
    }
  } else {
    for (int pid : present) {
      auto items = generate_for(pid);
      generated.insert(generated.end(), items.begin(), items.end());
    }
  }

  std::sort(generated.begin(), generated.end(), [](const Generated& a, const Generated& b) {
    if (a.speaker != b.speaker) return a.speaker < b.speaker;
    return a.broadcast && !b.broadcast;  // broadcast applies before the private message
  });

  for (const auto& g : generated) {
    MessageEvent ev;
    ev.utterance = g.utterance;
    ev.intent = to_string(g.plan.intent);
    log.messages.push_back(ev);
    if (g.broadcast) {
      forum_.push_back(g.utterance);
      continue;
    }
    const int listener = *g.utterance.listener_id;
    auto listener_state = pstate_.find(listener);
    if (listener_state == pstate_.end()) continue;
    auto& lstate = listener_state->second;
    const auto& listener_profile = scenario_.participant(listener);
    backend_.assess(lstate.memory, g.utterance, listener_profile, round_);
    backend_.evaluate_relation(lstate.memory, g.speaker, g.utterance.claims);
    lstate.exchange_log.push_back(g.utterance);
    pstate_.at(g.speaker).exchange_log.push_back(g.utterance);
  }

  // Forum reading: new posts under the reader's candidate communities.
  for (int pid : present) {
    auto& state = pstate_.at(pid);
    const auto& profile = scenario_.participant(pid);
    std::set<int> candidate_topics;
    for (const auto& r : pool_resources(state.queue)) candidate_topics.insert(r.community_id);
    for (const auto& r : pending_resources(state.queue)) candidate_topics.insert(r.community_id);
    std::vector<const Utterance*> fresh;
    for (size_t i = state.forum_cursor; i < forum_.size(); ++i) {
      const auto& post = forum_[i];
      if (post.speaker_id == pid) continue;
      if (!candidate_topics.empty() && post.topic && !candidate_topics.count(*post.topic))
        continue;
      fresh.push_back(&post);
    }
    const size_t window = static_cast<size_t>(std::max(0, config_.forum_window));
    if (fresh.size() > window) fresh.erase(fresh.begin(), fresh.end() - window);
    for (const auto* post : fresh) backend_.assess(state.memory, *post, profile, round_);
    state.forum_cursor = forum_.size();
  }
}

bool Simulation::finished() const {
  if (done_) return true;
  if (round_ >= config_.max_rounds) return true;
  for (const auto& [pid, state] : pstate_) {
    if (!state.resolved()) return false;
  }
  return true;
}

void Simulation::step_round() {
  if (finished()) return;
  RoundLog log;
  log.round = round_;
  admit_resources(log);
  admit_participants(log);
  for (int pid : log.admitted_participants) pstate_.at(pid).first_seen_round = round_;
  refresh_vulnerable();
  if (policy_.sort_rule != SortRule::Fifo) log.vulnerable = vulnerable_;
  sort_and_promote(log);
  run_decisions(log);
  social_phase(log);
  log_.push_back(std::move(log));
  ++round_;
}

void Simulation::finalize_outcome() {
  const int last_round = std::max(0, round_ - 1);
  for (const auto& p : scenario_.participants) {
    if (!outcome_.wait_rounds.count(p.id))
      outcome_.wait_rounds[p.id] = std::max(0, last_round - p.entry_round);
    if (!outcome_.satisfaction.count(p.id)) outcome_.satisfaction[p.id] = 0.0;
  }
}

SimulationTrace Simulation::run() {
  while (!finished()) step_round();
  finalize_outcome();
  SimulationTrace trace;
  trace.seed = seed_;
  trace.rounds = std::move(log_);
  trace.outcome = outcome_;
  done_ = true;
  return trace;
}

SimulationTrace run_simulation(const Scenario& scenario, const Policy& policy,
                               DecisionBackend& backend, uint64_t seed, int max_rounds,
                               SimulationConfig config) {
  config.max_rounds = max_rounds;
  Simulation sim(scenario, policy, backend, seed, config);
  return sim.run();
}

}  // namespace allocsim
