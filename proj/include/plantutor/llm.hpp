#pragma once
//
// Prompt assembly and a minimal OpenAI-compatible chat-completion client.
// The model only rephrases text produced by the validator or the hinter;
// prompts are fixed templates filled with PDDL text, the template
// explanation or hint, and the current state. No session data goes in.
//

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "httplib.h"
#include "json.hpp"

namespace plantutor {

enum class PromptKind { explanation, hint };

struct PromptBundle {
  PromptKind kind = PromptKind::explanation;
  std::string domain_name;
  std::string domain_text;
  std::string problem_text;
  std::string payload_text;  // template explanation or hint
  std::string state_text;
  std::string rendered;
};

namespace detail {

inline void require_nonempty(std::string_view value, std::string_view what) {
  if (value.empty()) throw std::invalid_argument("prompt input '" + std::string(what) + "' is empty");
}

}  // namespace detail

inline PromptBundle build_explanation_prompt(std::string domain_name, std::string domain_text,
                                             std::string problem_text, std::string explanation,
                                             std::string state_text) {
  detail::require_nonempty(domain_name, "domain name");
  detail::require_nonempty(domain_text, "domain");
  detail::require_nonempty(problem_text, "problem");
  detail::require_nonempty(explanation, "explanation");
  detail::require_nonempty(state_text, "state");
  PromptBundle b{PromptKind::explanation, std::move(domain_name), std::move(domain_text), std::move(problem_text),
                 std::move(explanation), std::move(state_text), {}};
  b.rendered =
      "The following lines describe the " + b.domain_name + " domain file :\n" +
      b.domain_text + "\n"
      "\n"
      "The problem to be solved is described in pddl format  as:\n" +
      b.problem_text + "\n"
      "\n"
      "While running a plan for a problem, an action failed and an explanation generator was used to generate the "
      "following explanation:\n"
      "Explanation:  " + b.payload_text + "\n"
      "\n"
      "The state of the problem - which means the set of predicates that are true in the plan upto the first invalid "
      "action are as follows \n"
      "State: " + b.state_text + "\n"
      "\n"
      "Can you please convert the explanation into a brief, more non-expert friendly message that a novice user can "
      "understand?\n"
      "Also, can you suggested briefly what could be done to fix the issue, taking into account the state reached by "
      "the plan so far?";
  return b;
}

inline PromptBundle build_hint_prompt(std::string domain_name, std::string domain_text, std::string problem_text,
                                      std::string hint, std::string state_text) {
  detail::require_nonempty(domain_name, "domain name");
  detail::require_nonempty(domain_text, "domain");
  detail::require_nonempty(problem_text, "problem");
  detail::require_nonempty(hint, "hint");
  detail::require_nonempty(state_text, "state");
  PromptBundle b{PromptKind::hint, std::move(domain_name), std::move(domain_text), std::move(problem_text),
                 std::move(hint), std::move(state_text), {}};
  b.rendered =
      "This is the pddl domain file for the " + b.domain_name + " domain :\n" +
      b.domain_text + "\n"
      "\n"
      "A user has to solve a this problem task described in pddl \n" +
      b.problem_text + "\n"
      "\n"
      "The plan was run till the problem reached this state - that is the set of predicates that are true :\n" +
      b.state_text + "\n"
      "\n"
      "And the hint generated, which suggests which next action to take with certain arguments to actions replaced "
      "with ? is given below:\n" +
      b.payload_text + "\n"
      "\n"
      "Can you please convert the explanation into a brief, more non-expert friendly message that a novice user can "
      "understand?\n"
      "Also, can you suggested briefly what could be done to fix the issue, taking into account the state reached by "
      "the plan so far?";
  return b;
}

struct LlmConfig {
  bool enabled = false;
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string model = "gpt-3.5-turbo-0125";
  // Name of the environment variable that holds the API key.
  std::string api_key_env = "OPENAI_API_KEY";
  std::chrono::milliseconds timeout{20000};
  double temperature = 0.0;
  std::optional<std::string> system_message;
};

struct Endpoint {
  std::string scheme_host_port;
  std::string path;
};

inline std::optional<Endpoint> split_url(std::string_view url) {
  auto scheme = url.find("://");
  if (scheme == std::string_view::npos) return std::nullopt;
  auto slash = url.find('/', scheme + 3);
  if (slash == std::string_view::npos) return Endpoint{std::string(url), "/"};
  return Endpoint{std::string(url.substr(0, slash)), std::string(url.substr(slash))};
}

inline nlohmann::json chat_request_body(const PromptBundle& bundle, const LlmConfig& cfg) {
  nlohmann::json messages = nlohmann::json::array();
  if (cfg.system_message) messages.push_back({{"role", "system"}, {"content", *cfg.system_message}});
  messages.push_back({{"role", "user"}, {"content", bundle.rendered}});
  return {{"model", cfg.model}, {"messages", messages}, {"temperature", cfg.temperature}};
}

// Sends the prompt and returns the model's reply, or nullopt on any failure
// (disabled, unreachable, timeout, non-2xx, malformed body). Never throws and
// never retries.
inline std::optional<std::string> translate(const PromptBundle& bundle, const LlmConfig& cfg) {
  if (!cfg.enabled) return std::nullopt;
  try {
    auto ep = split_url(cfg.endpoint);
    if (!ep) {
      std::cerr << "llm: invalid endpoint '" << cfg.endpoint << "'\n";
      return std::nullopt;
    }
    httplib::Client client(ep->scheme_host_port);
    auto secs = std::chrono::duration_cast<std::chrono::seconds>(cfg.timeout);
    auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(cfg.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());
    httplib::Headers headers;
    if (const char* key = cfg.api_key_env.empty() ? nullptr : std::getenv(cfg.api_key_env.c_str()))
      headers.emplace("Authorization", std::string("Bearer ") + key);
    auto res = client.Post(ep->path, headers, chat_request_body(bundle, cfg).dump(), "application/json");
    if (!res) {
      std::cerr << "llm: request failed: " << httplib::to_string(res.error()) << "\n";
      return std::nullopt;
    }
    if (res->status < 200 || res->status >= 300) {
      std::cerr << "llm: endpoint returned HTTP " << res->status << "\n";
      return std::nullopt;
    }
    auto body = nlohmann::json::parse(res->body, nullptr, false);
    if (body.is_discarded() || !body.contains("choices") || !body["choices"].is_array() || body["choices"].empty()) {
      std::cerr << "llm: malformed response\n";
      return std::nullopt;
    }
    const auto& content = body["choices"][0]["message"]["content"];
    if (!content.is_string()) {
      std::cerr << "llm: malformed response\n";
      return std::nullopt;
    }
    return content.get<std::string>();
  } catch (const std::exception& e) {
    std::cerr << "llm: " << e.what() << "\n";
    return std::nullopt;
  }
}

}  // namespace plantutor
