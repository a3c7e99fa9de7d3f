#include "allocsim/agents/prompts.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <sstream>
#include <thread>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <json.hpp>

namespace allocsim {

namespace {

// Embedded copies of the assets under assets/prompts/; a unit test keeps the
// two in sync.

const char* kUtteranceGeneration = R"({role description}

Here is your memory
{memory}

Your goal is to rent one house. For now, you want to discuss this with some acquaintances.
{utterance plan}

Your acquaintances include:
{acquaintances}

Your recent chat records with your acquaintances:
{recent chats}

{example}

!![IMPORTANT]: the information in EXAMPLE should NOT appear in response !!

- Respond in this format:

Thought: (You always think about what to do)

Acquaintance: (Acquaintance name, could be a list or string)

Output: (things you want to tell this Acquaintance in particular, stay consistent with your plan and thought)

.. (this Thought/Acquaintance/Output repeat at most {acquaintance number} times!!)

Respond in first person:
)";

const char* kCommunicationPlan = R"({role description}

You want to rent a house. For now, you want to discuss this with some acquaintances.

{acquaintance description}

Here is your memory
{memory}

The current situation of the renting system is:
{system competitiveness description}

Your personality is {personality}
{goal}

Respond in this format:

Intent: (honest / deceptive / withhold)

Target: (the acquaintance you plan to talk to)

Goal: (what you want to achieve with this conversation)

Respond in the second person:
)";

const char* kDecision = R"(Choosing one house needs the following steps:

1. Choose a community 2. Choose the type of house 3. Choose a house

This is information you collected from previous conversations with others:

{memory}

{role description}

You're planning to choose one house.

To choose a house that satisfies you, you are going to {task}.

{house info}

{thought hint}

- If you made up your choice, respond in this format:

Thought: ({thought type})

Action: Choose

Action Input: {choose type}.

- If you chose none of them, respond in this format:

Thought: ({thought type})

Action: Give up

Action Input: I choose none of these options.
)";

const char* kBroadcasting = R"({role description}

Here's your plan to publish info online:
{plan}

Here is your memory:
{memory}

You can publish house information online if you want to. The info you posted should contain information about the community and the house.
The available community index should be one of [{community ids}].

- If you want to publish house information online, respond in this format:

Thought: (your view on the information you want to publish)

Action: Publish

Community: (community index, should be one of [{community ids}])

Info: (The information you want to publish about this community, stay consistent with your plan and thought; Ensure that the information is specific and clear)

- If you don't want to publish anything respond in this format:

Thought: (reason why you don't want to publish anything)

Action: Give up
)";

const char* kRelationEvaluation = R"(Your relationship with your acquaintances may include:

Friend: A person with whom one shares a close and mutually supportive bond of affection and trust.

Enemy: A person who is actively opposed or hostile to another, often due to conflicts or animosity.

Competitor: Someone who engages in rivalry or competition with another, typically in the same field or for the same goal.

Mate: A partner in a romantic or sexual relationship, often implying a deep emotional connection.

Colleague: A person with whom one works or collaborates, typically within the same organization or profession.

Stranger: An individual who is not known or familiar to someone, often encountered for the first time.

Your task is to update your relation with {acquaintance name}, based on your previous view of {acquaintance name} and recent communication.

{role description}

Here is your memory:
{memory} {relation}

Here's your recent communication with {acquaintance name}:

{communication}

- Respond in this format:

Relation: (friend/enemy/competitor/mate/colleague/stranger)

View: (your updated view of this person)

Respond:
)";

const char* kMemoryReflection = R"(Progressively summarize new lines provided, adding onto the previous summary and returning a new summary.

EXAMPLE

Current summary:

You think a large house is too big for your family. And you didn't make a choice.

New lines:

Thought: The middle house can accommodate my family to live in and has high cost-effectiveness.

Output: My choice is the middle house.

New summary:

You think a middle house can accommodate your family members, better than a large house. And you choose a middle house.

END OF EXAMPLE

Current summary:

{summary}

New lines of conversation:

{new lines}

New summary:
)";

const char* kMemoryAssessment = R"(You're {name}. You're planning to choose one house.

Your task is to use MEMORY to assess the credibility of the forum information and summarize the useful information in the forum information based on your previous summary.

MEMORY:

{memory}

End of MEMORY

Here's the forum information:

{forum info}

[!Important!]:

Keep in mind that you and your competitors are vying to rent a house.

Both you and your competitors can share diverse information on the forum.

And you get forum information from this platform.

Remember to save the sequence number of the information you believe in in the summary content

- Respond in this format:

Trusted: (Summary of the useful information, which you assessed as trustworthy in the forum information)

Suspicious: (Summary of the suspicious information; If there's no suspicious information, simply return None)

Reason: (why do other competitors say these things? Try to find a reasonable intention for their intention.)

Respond:
)";

}  // namespace

const std::vector<PromptTemplate>& all_prompt_templates() {
  static const std::vector<PromptTemplate> all = {
      PromptTemplate::UtteranceGeneration, PromptTemplate::CommunicationPlan,
      PromptTemplate::Decision,            PromptTemplate::Broadcasting,
      PromptTemplate::RelationEvaluation,  PromptTemplate::MemoryReflection,
      PromptTemplate::MemoryAssessment};
  return all;
}

std::string to_string(PromptTemplate t) {
  switch (t) {
    case PromptTemplate::UtteranceGeneration: return "utterance_generation";
    case PromptTemplate::CommunicationPlan: return "communication_plan";
    case PromptTemplate::Decision: return "decision";
    case PromptTemplate::Broadcasting: return "broadcasting";
    case PromptTemplate::RelationEvaluation: return "relation_evaluation";
    case PromptTemplate::MemoryReflection: return "memory_reflection";
    case PromptTemplate::MemoryAssessment: return "memory_assessment";
  }
  return "decision";
}

const std::string& prompt_template_text(PromptTemplate t) {
  static const std::map<PromptTemplate, std::string> table = {
      {PromptTemplate::UtteranceGeneration, kUtteranceGeneration},
      {PromptTemplate::CommunicationPlan, kCommunicationPlan},
      {PromptTemplate::Decision, kDecision},
      {PromptTemplate::Broadcasting, kBroadcasting},
      {PromptTemplate::RelationEvaluation, kRelationEvaluation},
      {PromptTemplate::MemoryReflection, kMemoryReflection},
      {PromptTemplate::MemoryAssessment, kMemoryAssessment}};
  return table.at(t);
}

std::vector<std::string> prompt_placeholders(PromptTemplate t) {
  const std::string& text = prompt_template_text(t);
  std::vector<std::string> out;
  size_t pos = 0;
  while ((pos = text.find('{', pos)) != std::string::npos) {
    const size_t end = text.find('}', pos + 1);
    if (end == std::string::npos) break;
    const std::string name = text.substr(pos + 1, end - pos - 1);
    if (!name.empty() && name.find('\n') == std::string::npos) out.push_back(name);
    pos = end + 1;
  }
  return out;
}

std::string render_prompt(PromptTemplate t, const std::map<std::string, std::string>& context) {
  const std::string& text = prompt_template_text(t);
  std::string out;
  out.reserve(text.size());
  std::vector<std::string> unbound;
  size_t pos = 0;
  while (pos < text.size()) {
    const size_t open = text.find('{', pos);
    if (open == std::string::npos) {
      out.append(text, pos, std::string::npos);
      break;
    }
    const size_t close = text.find('}', open + 1);
    if (close == std::string::npos) {
      out.append(text, pos, std::string::npos);
      break;
    }
    out.append(text, pos, open - pos);
    const std::string name = text.substr(open + 1, close - open - 1);
    auto it = context.find(name);
    if (it == context.end()) {
      if (std::find(unbound.begin(), unbound.end(), name) == unbound.end())
        unbound.push_back(name);
      out.append(text, open, close - open + 1);
    } else {
      out.append(it->second);
    }
    pos = close + 1;
  }
  if (!unbound.empty()) {
    std::string msg = "render_prompt(" + to_string(t) + "): unbound placeholders:";
    for (const auto& name : unbound) msg += " {" + name + "}";
    throw ValidationError(msg);
  }
  return out;
}

std::optional<std::string> ParsedReply::first(const std::string& label) const {
  for (const auto& b : blocks) {
    if (b.label == label) return b.text;
  }
  return std::nullopt;
}

std::vector<std::string> ParsedReply::all(const std::string& label) const {
  std::vector<std::string> out;
  for (const auto& b : blocks) {
    if (b.label == label) out.push_back(b.text);
  }
  return out;
}

const ReplyGrammar& reply_grammar(PromptTemplate t) {
  static const std::map<PromptTemplate, ReplyGrammar> table = {
      {PromptTemplate::UtteranceGeneration,
       {{"Thought", "Acquaintance", "Output"}, {"Thought", "Acquaintance", "Output"}, true}},
      {PromptTemplate::CommunicationPlan, {{"Intent", "Target", "Goal"}, {"Intent"}, false}},
      {PromptTemplate::Decision, {{"Thought", "Action", "Action Input"}, {"Thought", "Action"}, false}},
      {PromptTemplate::Broadcasting,
       {{"Thought", "Action", "Community", "Info"}, {"Thought", "Action"}, false}},
      {PromptTemplate::RelationEvaluation, {{"Relation", "View"}, {"Relation"}, false}},
      {PromptTemplate::MemoryReflection, {{"New summary"}, {}, false}},
      {PromptTemplate::MemoryAssessment,
       {{"Trusted", "Suspicious", "Reason"}, {"Trusted"}, false}}};
  return table.at(t);
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string truncate_for_error(const std::string& s) {
  const std::string t = trim(s);
  return t.size() > 160 ? t.substr(0, 160) + "..." : t;
}

}  // namespace

ParsedReply parse_structured(const std::string& text, const ReplyGrammar& grammar) {
  // Longest label first so "Action Input" wins over "Action".
  std::vector<std::string> labels = grammar.labels;
  std::sort(labels.begin(), labels.end(),
            [](const std::string& a, const std::string& b) { return a.size() > b.size(); });

  ParsedReply reply;
  ParsedBlock* current = nullptr;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    bool matched = false;
    for (const auto& label : labels) {
      if (line.size() > label.size() && line.compare(0, label.size(), label) == 0 &&
          line[label.size()] == ':') {
        reply.blocks.push_back({label, trim(line.substr(label.size() + 1))});
        current = &reply.blocks.back();
        matched = true;
        break;
      }
    }
    if (!matched && current != nullptr) {
      const std::string extra = trim(line);
      if (!extra.empty()) {
        if (!current->text.empty()) current->text += "\n";
        current->text += extra;
      }
    }
  }

  // Free-text grammars (memory reflection): the whole reply is the block.
  if (reply.blocks.empty() && grammar.labels.size() == 1 && grammar.required.empty()) {
    const std::string whole = trim(text);
    if (whole.empty()) throw ParseError("empty reply");
    reply.blocks.push_back({grammar.labels.front(), whole});
    return reply;
  }

  if (reply.blocks.empty())
    throw ParseError("no labeled blocks found in reply: \"" + truncate_for_error(text) + "\"");
  for (const auto& required : grammar.required) {
    if (!reply.first(required)) {
      throw ParseError("missing required block '" + required + "' in reply: \"" +
                       truncate_for_error(text) + "\"");
    }
  }
  return reply;
}

ParsedReply parse_structured(const std::string& text, PromptTemplate t) {
  return parse_structured(text, reply_grammar(t));
}

LlmEndpointConfig LlmEndpointConfig::from_env() {
  LlmEndpointConfig config;
  if (const char* v = std::getenv("ALLOCSIM_LLM_ENDPOINT")) config.endpoint = v;
  if (const char* v = std::getenv("ALLOCSIM_LLM_API_KEY")) config.api_key = v;
  if (const char* v = std::getenv("ALLOCSIM_LLM_MODEL")) config.model = v;
  if (const char* v = std::getenv("ALLOCSIM_LLM_TEMPERATURE")) config.temperature = std::stod(v);
  return config;
}

CompletionFn make_http_completion(const LlmEndpointConfig& config) {
  if (config.endpoint.empty())
    throw ValidationError("LLM endpoint not configured (set ALLOCSIM_LLM_ENDPOINT)");

  // Split scheme://host[:port]/path once, up front.
  std::string base = config.endpoint;
  std::string path = "/v1/chat/completions";
  const size_t scheme_end = base.find("://");
  if (scheme_end != std::string::npos) {
    const size_t path_start = base.find('/', scheme_end + 3);
    if (path_start != std::string::npos) {
      path = base.substr(path_start);
      base = base.substr(0, path_start);
    }
  }

  return [config, base, path](const std::string& prompt) -> std::string {
    nlohmann::json request = {
        {"model", config.model},
        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
        {"temperature", config.temperature},
    };
    const std::string body = request.dump();

    std::string last_error;
    for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
      if (attempt > 0) {
        std::this_thread::sleep_for(std::chrono::milliseconds(250 << (attempt - 1)));
      }
      httplib::Client client(base);
      client.set_read_timeout(config.timeout_seconds, 0);
      client.set_connection_timeout(config.timeout_seconds, 0);
      httplib::Headers headers;
      if (!config.api_key.empty())
        headers.emplace("Authorization", "Bearer " + config.api_key);
      auto res = client.Post(path, headers, body, "application/json");
      if (!res) {
        last_error = "transport error " + httplib::to_string(res.error());
        continue;
      }
      if (res->status != 200) {
        last_error = "HTTP " + std::to_string(res->status);
        continue;
      }
      try {
        auto reply = nlohmann::json::parse(res->body);
        return reply.at("choices").at(0).at("message").at("content").get<std::string>();
      } catch (const std::exception& e) {
        last_error = std::string("bad response body: ") + e.what();
      }
    }
    throw IoError("chat completion failed after " + std::to_string(config.max_retries + 1) +
                  " attempts: " + last_error);
  };
}

}  // namespace allocsim
