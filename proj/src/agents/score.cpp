#include <algorithm>

#include "allocsim/agents/types.hpp"

namespace allocsim {

std::string to_string(Intent v) {
  switch (v) {
    case Intent::Honest: return "honest";
    case Intent::Deceptive: return "deceptive";
    case Intent::Withhold: return "withhold";
  }
  return "honest";
}

std::string to_string(MemorySource v) {
  switch (v) {
    case MemorySource::Policymaker: return "policymaker";
    case MemorySource::Broadcast: return "broadcast";
    case MemorySource::PrivateMsg: return "private";
    case MemorySource::Self: return "self";
  }
  return "self";
}

std::optional<double> AgentMemory::trusted_value(int resource_id,
                                                 const std::string& attribute) const {
  for (auto it = trusted.rbegin(); it != trusted.rend(); ++it) {
    if (it->resource_id == resource_id && it->attribute == attribute) return it->value;
  }
  return std::nullopt;
}

const QueueCompetitiveness* CompetitivenessReport::queue(int queue_id) const {
  for (const auto& q : queues) {
    if (q.queue_id == queue_id) return &q;
  }
  return nullptr;
}

Scored score_resource(const ParticipantProfile& p,
                      const HouseResource& r,
                      const RatingTable& table,
                      DecisionBackend& backend) {
  Scored s;
  for (const auto& [feature, weight] : p.feature_weights) {
    s.objective += weight * table.score_resource_feature(feature, r);
  }
  s.subjective = backend.score(p, r);
  s.total = s.objective + s.subjective;  // outer W fixed to 1
  return s;
}

}  // namespace allocsim
