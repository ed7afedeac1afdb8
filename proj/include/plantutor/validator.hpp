#pragma once
//
// Plan validation with skip-and-continue semantics: an inapplicable step is
// recorded with its unmet preconditions and treated as a no-op, so every
// failing step of a plan is diagnosed in one pass. The state trace stops at
// the first failure, which is what the state display shows.
//

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "plantutor/error.hpp"
#include "plantutor/state.hpp"
#include "plantutor/task.hpp"

namespace plantutor {

struct PlanStep {
  std::string schema;
  std::vector<std::string> args;

  bool operator==(const PlanStep&) const = default;
};

using Plan = std::vector<PlanStep>;

inline std::string to_text(const PlanStep& step) {
  std::string s = "(" + step.schema;
  for (const auto& a : step.args) s += " " + a;
  return s + ")";
}

inline PlanStep to_step(const GroundedTask& task, const GroundAction& a) { return {a.schema, task.object_names(a.args)}; }

// One step per line, "(name arg ...)". Blank lines and ';' comments are
// ignored, as are a leading "N:" index and a trailing "[duration]", so VAL
// style plan files are accepted. Throws ResolveError on malformed lines.
inline Plan parse_plan(std::string_view text) {
  Plan plan;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto c = line.find(';'); c != std::string::npos) line.erase(c);
    if (auto b = line.find('['); b != std::string::npos) line.erase(b);
    auto open = line.find('(');
    if (open == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        throw ResolveError("plan line " + std::to_string(line_no) + ": expected (action arg ...)");
      continue;
    }
    auto close = line.find(')', open);
    if (close == std::string::npos) throw ResolveError("plan line " + std::to_string(line_no) + ": missing ')'");
    std::istringstream words(line.substr(open + 1, close - open - 1));
    PlanStep step;
    std::string w;
    while (words >> w) {
      std::transform(w.begin(), w.end(), w.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      if (step.schema.empty())
        step.schema = w;
      else
        step.args.push_back(w);
    }
    if (step.schema.empty()) throw ResolveError("plan line " + std::to_string(line_no) + ": empty step");
    plan.push_back(std::move(step));
  }
  return plan;
}

inline std::string format_plan(const Plan& plan) {
  std::string out;
  for (const auto& s : plan) out += to_text(s) + "\n";
  return out;
}

// Resolves every step to a ground action. Throws ResolveError naming the step.
inline std::vector<GroundAction> resolve_plan(const GroundedTask& task, const Plan& plan) {
  std::vector<GroundAction> out;
  out.reserve(plan.size());
  for (std::size_t i = 0; i < plan.size(); ++i) {
    std::vector<std::string> args = plan[i].args;
    for (auto& a : args)
      std::transform(a.begin(), a.end(), a.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    std::string schema = plan[i].schema;
    std::transform(schema.begin(), schema.end(), schema.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    try {
      out.push_back(task.instantiate(schema, args));
    } catch (const ResolveError& e) {
      throw ResolveError(i, e.what());
    }
  }
  return out;
}

enum class StepStatus { valid, invalid };

struct Failure {
  std::size_t step_index = 0;  // 0-based
  GroundAction action;
  std::vector<Atom> unmet;     // canonical order, never empty
};

struct ValidationReport {
  std::vector<StepStatus> step_status;
  std::vector<Failure> failures;
  // init followed by the state after each step of the valid prefix; stops
  // before the first failing step.
  std::vector<State> trace;
  bool is_valid = true;
  // Evaluated on trace.back().
  bool goal_achieved = false;
  // Working state after the whole skip-and-continue pass.
  State final_state;

  std::size_t valid_prefix_length() const { return trace.size() - 1; }
};

inline ValidationReport validate(const GroundedTask& task, const std::vector<GroundAction>& steps) {
  ValidationReport r;
  State working = task.init();
  r.trace.push_back(working);
  bool prefix_intact = true;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const GroundAction& a = steps[i];
    if (is_applicable(working, a)) {
      working = apply_unchecked(working, a.add, a.del);
      r.step_status.push_back(StepStatus::valid);
      if (prefix_intact) r.trace.push_back(working);
    } else {
      r.step_status.push_back(StepStatus::invalid);
      r.failures.push_back({i, a, unmet_preconditions(working, a)});
      prefix_intact = false;
    }
  }
  r.is_valid = r.failures.empty();
  r.goal_achieved = satisfies(r.trace.back(), task.goal());
  r.final_state = std::move(working);
  return r;
}

inline ValidationReport validate(const GroundedTask& task, const Plan& plan) {
  return validate(task, resolve_plan(task, plan));
}

struct TraceEntry {
  std::string label;  // "init" or the step text
  State state;
  std::vector<Atom> added;
  std::vector<Atom> removed;
};

inline std::vector<TraceEntry> state_trace(const GroundedTask& task, const std::vector<GroundAction>& steps) {
  ValidationReport r = validate(task, steps);
  std::vector<TraceEntry> out;
  out.push_back({"init", r.trace.front(), {}, {}});
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    const State& before = r.trace[i - 1];
    const State& after = r.trace[i];
    out.push_back({task.action_text(steps[i - 1]), after, set_difference(after.atoms(), before.atoms()),
                   set_difference(before.atoms(), after.atoms())});
  }
  return out;
}

inline std::vector<TraceEntry> state_trace(const GroundedTask& task, const Plan& plan) {
  return state_trace(task, resolve_plan(task, plan));
}

}  // namespace plantutor
