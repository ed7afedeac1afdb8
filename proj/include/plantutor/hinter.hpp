#pragma once
//
// Next-action hints: plan from the learner's current state and show the
// first action with each argument revealed independently with probability p.
//

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <stop_token>
#include <string>
#include <vector>

#include "plantutor/search.hpp"
#include "plantutor/semantics.hpp"
#include "plantutor/task.hpp"

namespace plantutor {

struct HintConfig {
  double reveal_probability = 0.5;
  std::chrono::milliseconds timeout{5000};
  std::optional<std::uint64_t> rng_seed;

  void check() const {
    if (!(reveal_probability >= 0.0 && reveal_probability <= 1.0))
      throw std::invalid_argument("hint reveal probability must lie in [0, 1]");
    if (timeout <= std::chrono::milliseconds::zero()) throw std::invalid_argument("hint timeout must be positive");
  }
};

struct Hint {
  GroundAction action;
  std::vector<bool> visible;  // one flag per argument
  std::string text;
};

enum class HintStatus { ok, timeout, unsolvable, already_solved };

// Machine-readable status codes.
inline const char* status_code(HintStatus s) {
  switch (s) {
    case HintStatus::ok: return "ok";
    case HintStatus::timeout: return "hint-timeout";
    case HintStatus::unsolvable: return "unsolvable";
    case HintStatus::already_solved: return "already-solved";
  }
  return "unknown";
}

inline const char* status_message(HintStatus s) {
  switch (s) {
    case HintStatus::ok: return "Here is a hint.";
    case HintStatus::timeout: return "Could not compute a hint within the time limit. Try again after changing your plan.";
    case HintStatus::unsolvable: return "The goal cannot be reached from the state your plan leads to.";
    case HintStatus::already_solved: return "Your plan already achieves the goal.";
  }
  return "";
}

struct HintResult {
  HintStatus status = HintStatus::unsolvable;
  std::optional<Hint> hint;
};

inline std::vector<bool> sample_mask(std::size_t arity, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution reveal(p);
  std::vector<bool> mask(arity);
  for (std::size_t i = 0; i < arity; ++i) mask[i] = reveal(rng);
  return mask;
}

inline constexpr std::string_view kHintPrefix = "You might want to try the action: ";

inline std::string hint_text(const GroundedTask& task, const GroundAction& a, const std::vector<bool>& visible,
                             const SemanticMap& m) {
  std::vector<std::string> shown;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    shown.push_back(visible[i] ? m.display(task.object_name(a.args[i])) : std::string("?"));
  return std::string(kHintPrefix) + fill_pattern(m.action_template(a.schema), shown);
}

inline HintResult next_hint(const GroundedTask& task, const State& current, const SemanticMap& m,
                            const HintConfig& cfg, std::mt19937_64& rng, std::stop_token stop = {}) {
  cfg.check();
  HintResult out;
  if (satisfies(current, task.goal())) {
    out.status = HintStatus::already_solved;
    return out;
  }
  SearchResult r = plan_search(task, current, cfg.timeout, stop);
  if (r.status == SearchStatus::timeout) {
    out.status = HintStatus::timeout;
    return out;
  }
  if (r.status == SearchStatus::unsolvable) {
    out.status = HintStatus::unsolvable;
    return out;
  }
  Hint h;
  h.action = task.actions()[r.plan.front()];
  h.visible = sample_mask(h.action.args.size(), cfg.reveal_probability, rng);
  h.text = hint_text(task, h.action, h.visible, m);
  out.status = HintStatus::ok;
  out.hint = std::move(h);
  return out;
}

inline HintResult next_hint(const GroundedTask& task, const State& current, const SemanticMap& m,
                            const HintConfig& cfg) {
  std::mt19937_64 rng(cfg.rng_seed ? *cfg.rng_seed : std::random_device{}());
  return next_hint(task, current, m, cfg, rng);
}

}  // namespace plantutor
