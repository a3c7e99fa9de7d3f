#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "allocsim/errors.hpp"

namespace allocsim {

// One template per social/decision behavior; shipped as text assets under
// assets/prompts/ with {placeholder} syntax.
enum class PromptTemplate {
  UtteranceGeneration,
  CommunicationPlan,
  Decision,
  Broadcasting,
  RelationEvaluation,
  MemoryReflection,
  MemoryAssessment,
};

const std::vector<PromptTemplate>& all_prompt_templates();
std::string to_string(PromptTemplate t);
const std::string& prompt_template_text(PromptTemplate t);

// Names of every {placeholder} occurring in the template, in order.
std::vector<std::string> prompt_placeholders(PromptTemplate t);

// Pure substitution. Throws ValidationError listing every unbound
// placeholder; unused context keys are ignored.
std::string render_prompt(PromptTemplate t, const std::map<std::string, std::string>& context);

// A labeled block extracted from a model reply ("Thought: ...").
struct ParsedBlock {
  std::string label;
  std::string text;
};

struct ParsedReply {
  std::vector<ParsedBlock> blocks;

  std::optional<std::string> first(const std::string& label) const;
  std::vector<std::string> all(const std::string& label) const;
};

// Labels a template's replies may use, plus which ones must appear.
struct ReplyGrammar {
  std::vector<std::string> labels;
  std::vector<std::string> required;
  bool repeating = false;  // label groups may repeat (utterance generation)
};

const ReplyGrammar& reply_grammar(PromptTemplate t);

// Extracts labeled blocks per the template grammar. Throws ParseError (with
// the offending text) when a required label is missing or nothing matches.
ParsedReply parse_structured(const std::string& text, const ReplyGrammar& grammar);
ParsedReply parse_structured(const std::string& text, PromptTemplate t);

// Transport for chat completion: prompt in, reply text out. The default
// implementation POSTs to the endpoint configured via environment variables
// (see docs/llm_endpoint.md); tests inject a stub.
using CompletionFn = std::function<std::string(const std::string& prompt)>;

struct LlmEndpointConfig {
  std::string endpoint;  // e.g. https://host/v1/chat/completions
  std::string api_key;
  std::string model;
  double temperature = 0.7;
  int max_retries = 3;
  int timeout_seconds = 60;

  // Reads ALLOCSIM_LLM_ENDPOINT / _API_KEY / _MODEL / _TEMPERATURE.
  static LlmEndpointConfig from_env();
};

// HTTP transport over the configured endpoint. Retries with backoff up to
// max_retries, then throws IoError.
CompletionFn make_http_completion(const LlmEndpointConfig& config);

}  // namespace allocsim
