#include "allocsim/agents/llm_backend.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace allocsim {

namespace {

std::string describe_role(const ParticipantProfile& p) {
  std::ostringstream os;
  os << "You are " << p.name << ", a " << to_string(p.personality)
     << " person with a family of " << p.family_size << " and a monthly rent budget of "
     << static_cast<long long>(p.rent_budget) << ".";
  return os.str();
}

std::string describe_memory(const AgentMemory& memory) {
  std::ostringstream os;
  if (memory.trusted.empty() && memory.long_term.empty()) return "(nothing yet)";
  for (const auto& s : memory.long_term) os << s << "\n";
  const size_t start = memory.trusted.size() > 5 ? memory.trusted.size() - 5 : 0;
  for (size_t i = start; i < memory.trusted.size(); ++i) {
    const auto& e = memory.trusted[i];
    if (e.attribute == "undisclosed") {
      os << "house " << e.resource_id << ": " << e.note << "\n";
    } else {
      os << "house " << e.resource_id << " " << e.attribute << " is about " << e.value << "\n";
    }
  }
  return os.str();
}

std::string describe_houses(const std::vector<HouseResource>& houses) {
  std::ostringstream os;
  for (const auto& h : houses) os << "House " << h.id << ": " << h.disclosed << "\n";
  return os.str();
}

std::optional<int> first_integer(const std::string& text) {
  size_t i = 0;
  while (i < text.size() && !std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
  if (i == text.size()) return std::nullopt;
  size_t end = i;
  while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
  return std::stoi(text.substr(i, end - i));
}

}  // namespace

LlmBackend::LlmBackend(const RatingTable& table, RuleParams rule_params, uint64_t seed,
                       CompletionFn transport, int max_retries)
    : fallback_(table, rule_params, seed),
      transport_(std::move(transport)),
      max_retries_(max_retries) {}

LlmBackend LlmBackend::from_env(const RatingTable& table, RuleParams rule_params, uint64_t seed) {
  auto config = LlmEndpointConfig::from_env();
  return LlmBackend(table, rule_params, seed, make_http_completion(config), config.max_retries);
}

std::optional<ParsedReply> LlmBackend::complete_parsed(
    PromptTemplate t, const std::map<std::string, std::string>& context) {
  const std::string prompt = render_prompt(t, context);
  for (int attempt = 0; attempt <= max_retries_; ++attempt) {
    ++calls_;
    try {
      return parse_structured(transport_(prompt), t);
    } catch (const ParseError&) {
    } catch (const IoError&) {
    }
  }
  ++fallbacks_;
  return std::nullopt;
}

int LlmBackend::select_queue(const ParticipantProfile& p,
                             const std::vector<QueueSummary>& queues,
                             const AgentMemory& memory) {
  std::ostringstream info;
  for (const auto& q : queues) {
    info << "Queue " << q.queue_id << ": " << q.pool_count << " houses now, sizes "
         << q.size_min << "-" << q.size_max << " m2, rents " << q.rent_min << "-" << q.rent_max
         << ", " << q.waiting_count << " waiting\n";
  }
  auto reply = complete_parsed(
      PromptTemplate::Decision,
      {{"memory", describe_memory(memory)},
       {"role description", describe_role(p)},
       {"task", "choose one queue to join"},
       {"house info", info.str()},
       {"thought hint", "Compare the queues against your budget and family needs."},
       {"thought type", "why this queue fits you"},
       {"choose type", "the queue index"}});
  if (reply) {
    auto action = reply->first("Action");
    auto input = reply->first("Action Input");
    if (action && action->rfind("Choose", 0) == 0 && input) {
      auto idx = first_integer(*input);
      if (idx && *idx >= 0 && *idx < static_cast<int>(queues.size())) return *idx;
    }
  }
  return fallback_.select_queue(p, queues, memory);
}

Decision LlmBackend::decide(const ParticipantProfile& p,
                            const std::vector<HouseResource>& visible,
                            const AgentMemory& memory,
                            const CompetitivenessReport& report,
                            const DecideContext& ctx) {
  if (visible.empty()) return fallback_.decide(p, visible, memory, report, ctx);
  auto reply = complete_parsed(
      PromptTemplate::Decision,
      {{"memory", describe_memory(memory)},
       {"role description", describe_role(p)},
       {"task", "pick the house you want, or give up this turn"},
       {"house info", describe_houses(visible)},
       {"thought hint", report.text},
       {"thought type", "your reasoning about communities, house types and houses"},
       {"choose type", "House <id>"}});
  if (!reply) return fallback_.decide(p, visible, memory, report, ctx);
  auto action = reply->first("Action");
  if (action && action->rfind("Give up", 0) == 0) return Decision::decline();
  auto input = reply->first("Action Input");
  if (action && action->rfind("Choose", 0) == 0 && input) {
    auto rid = first_integer(*input);
    if (rid) {
      for (const auto& h : visible) {
        if (h.id == *rid) return Decision::pick(*rid);
      }
    }
  }
  return fallback_.decide(p, visible, memory, report, ctx);
}

double LlmBackend::score(const ParticipantProfile& p, const HouseResource& r) {
  auto reply = complete_parsed(
      PromptTemplate::Decision,
      {{"memory", "(not needed)"},
       {"role description", describe_role(p)},
       {"task", "rate this house from 0 to 10"},
       {"house info", "House " + std::to_string(r.id) + ": " + r.disclosed},
       {"thought hint", "Higher means you would enjoy living there more."},
       {"thought type", "what you like or dislike"},
       {"choose type", "a rating between 0 and 10"}});
  if (reply) {
    if (auto input = reply->first("Action Input")) {
      if (auto rating = first_integer(*input)) return std::clamp(*rating, 0, 10);
    }
  }
  return fallback_.score(p, r);
}

CommunicationPlan LlmBackend::plan(const ParticipantProfile& p,
                                   const AgentMemory& memory,
                                   const CompetitivenessReport& report,
                                   std::optional<int> listener_id,
                                   std::optional<Relation> listener_relation,
                                   int round) {
  std::string acquaintance = "You have nobody particular in mind.";
  if (listener_id) {
    acquaintance = "You are about to talk to participant " + std::to_string(*listener_id);
    if (listener_relation) acquaintance += ", your " + to_string(*listener_relation);
    acquaintance += ".";
  }
  auto reply = complete_parsed(
      PromptTemplate::CommunicationPlan,
      {{"role description", describe_role(p)},
       {"acquaintance description", acquaintance},
       {"memory", describe_memory(memory)},
       {"system competitiveness description", report.text},
       {"personality", to_string(p.personality)},
       {"goal", "Your goal is to maximize your chance of renting the house you want."}});
  if (!reply) return fallback_.plan(p, memory, report, listener_id, listener_relation, round);

  CommunicationPlan out;
  out.listener_id = listener_id;
  const std::string intent = reply->first("Intent").value_or("honest");
  if (intent.find("deceptive") != std::string::npos) {
    out.intent = Intent::Deceptive;
  } else if (intent.find("withhold") != std::string::npos) {
    out.intent = Intent::Withhold;
  } else {
    out.intent = Intent::Honest;
  }
  out.goal = reply->first("Goal").value_or("");
  return out;
}

Utterance LlmBackend::speak(const ParticipantProfile& p,
                            const CommunicationPlan& plan,
                            const std::vector<Utterance>& history,
                            const AgentMemory& memory,
                            const CompetitivenessReport& report,
                            const std::vector<HouseResource>& visible,
                            int round) {
  std::ostringstream chats;
  for (const auto& u : history) chats << "Participant " << u.speaker_id << ": " << u.text << "\n";
  if (history.empty()) chats << "(no chats yet)";

  Utterance out;
  out.speaker_id = p.id;
  out.listener_id = plan.listener_id;

  if (!plan.listener_id) {
    std::ostringstream ids;
    std::vector<int> communities;
    for (const auto& h : visible) communities.push_back(h.community_id);
    std::sort(communities.begin(), communities.end());
    communities.erase(std::unique(communities.begin(), communities.end()), communities.end());
    for (size_t i = 0; i < communities.size(); ++i) ids << (i ? ", " : "") << communities[i];
    auto reply = complete_parsed(PromptTemplate::Broadcasting,
                                 {{"role description", describe_role(p)},
                                  {"plan", plan.goal},
                                  {"memory", describe_memory(memory)},
                                  {"community ids", ids.str()}});
    if (reply) {
      auto action = reply->first("Action");
      if (action && action->rfind("Publish", 0) == 0) {
        out.text = reply->first("Info").value_or("");
        if (auto community = reply->first("Community")) {
          if (auto topic = first_integer(*community)) out.topic = *topic;
        }
        if (!out.topic && !communities.empty()) out.topic = communities.front();
        return out;
      }
      out.text = "";  // chose not to publish
      return out;
    }
    // Bounded retries exhausted: withhold, logged via fallback_count.
    out.text = "Good luck with your search.";
    if (!communities.empty()) out.topic = communities.front();
    return out;
  }

  auto reply = complete_parsed(
      PromptTemplate::UtteranceGeneration,
      {{"role description", describe_role(p)},
       {"memory", describe_memory(memory) + "\n" + report.text},
       {"utterance plan", "Your plan: " + to_string(plan.intent) + ". " + plan.goal},
       {"acquaintances", "Participant " + std::to_string(*plan.listener_id)},
       {"recent chats", chats.str()},
       {"example",
        "EXAMPLE\nThought: I trust her.\nAcquaintance: Emma\nOutput: House 1 is affordable.\nEND "
        "OF EXAMPLE"},
       {"acquaintance number", "1"}});
  if (reply) {
    out.text = reply->first("Output").value_or("");
    return out;
  }
  out.text = "Good luck with your search.";  // withhold fallback
  return out;
}

void LlmBackend::assess(AgentMemory& memory,
                        const Utterance& incoming,
                        const ParticipantProfile& self,
                        int round) {
  auto reply = complete_parsed(PromptTemplate::MemoryAssessment,
                               {{"name", self.name},
                                {"memory", describe_memory(memory)},
                                {"forum info", incoming.text}});
  if (reply) {
    // Structured claims still go through the rule mechanics; the parsed
    // summaries land as notes.
    fallback_.assess(memory, incoming, self, round);
    MemoryEntry note;
    note.resource_id = -1;
    note.attribute = "assessment";
    note.source =
        incoming.listener_id ? MemorySource::PrivateMsg : MemorySource::Broadcast;
    note.from_participant = incoming.speaker_id;
    note.round = round;
    note.note = reply->first("Trusted").value_or("");
    memory.short_term.push_back(note);
    fallback_.reflect(memory, fallback_.params().reflection_threshold);
    return;
  }
  fallback_.assess(memory, incoming, self, round);
}

void LlmBackend::reflect(AgentMemory& memory, int threshold) {
  if (static_cast<int>(memory.short_term.size()) <= threshold) return;
  std::ostringstream lines;
  for (const auto& e : memory.short_term) {
    if (e.attribute == "assessment") {
      lines << e.note << "\n";
    } else {
      lines << "house " << e.resource_id << " " << e.attribute << " " << e.value << "\n";
    }
  }
  const std::string previous = memory.long_term.empty() ? "(none)" : memory.long_term.back();
  auto reply = complete_parsed(PromptTemplate::MemoryReflection,
                               {{"summary", previous}, {"new lines", lines.str()}});
  if (reply) {
    memory.long_term.push_back(reply->first("New summary").value_or(""));
    memory.short_term.clear();
    return;
  }
  fallback_.reflect(memory, threshold);
}

void LlmBackend::evaluate_relation(AgentMemory& memory,
                                   int peer_id,
                                   const std::vector<Claim>& exchange) {
  if (exchange.empty()) return;
  std::ostringstream comm;
  for (const auto& c : exchange) {
    comm << "They said house " << c.resource_id << " has " << c.attribute << " " << c.value
         << "\n";
  }
  auto& state = memory.relations[peer_id];
  auto reply = complete_parsed(
      PromptTemplate::RelationEvaluation,
      {{"acquaintance name", "participant " + std::to_string(peer_id)},
       {"role description", "You are re-evaluating an acquaintance."},
       {"memory", ""},
       {"relation", "Current relation: " + to_string(state.relation)},
       {"communication", comm.str()}});
  if (reply) {
    try {
      state.relation = relation_from_string(reply->first("Relation").value_or("stranger"));
    } catch (const ValidationError&) {
      // Unrecognized token: keep the previous relation.
    }
    state.moral_note = reply->first("View").value_or("");
    return;
  }
  fallback_.evaluate_relation(memory, peer_id, exchange);
}

}  // namespace allocsim
