#pragma once

#include <json.hpp>
#include <string>

#include "allocsim/engine.hpp"
#include "allocsim/metrics.hpp"
#include "allocsim/outcome.hpp"
#include "allocsim/policy.hpp"
#include "allocsim/scenario.hpp"

namespace allocsim {

// ordered_json keeps insertion order so serialized documents are
// byte-deterministic (schemas in docs/).
using ojson = nlohmann::ordered_json;

ojson scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const ojson& j);

ojson policy_to_json(const Policy& p);
Policy policy_from_json(const ojson& j);

ojson outcome_to_json(const AllocationOutcome& o);
AllocationOutcome outcome_from_json(const ojson& j);

ojson metrics_to_json(const MetricsReport& r);

ojson round_log_to_json(const RoundLog& r);
// One round per line, then one {"outcome": ...} line.
std::string trace_to_jsonl(const SimulationTrace& t);

// Atomic write (temp file + rename). Throws IoError.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace allocsim
