#pragma once
// Shared test fixtures and independent oracles. The oracles work on plain
// strings ("(pred a b)") and never call into the library's state engine.

#include <algorithm>
#include <deque>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "plantutor/plantutor.hpp"

namespace testing_support {

namespace pt = plantutor;

inline std::filesystem::path env_dir() { return PLANTUTOR_ENV_DIR; }

inline const pt::Registry& registry() {
  static const pt::Registry r = pt::Registry::load_directory(env_dir());
  return r;
}

inline const pt::EnvironmentBundle& bundle(const std::string& name) { return *registry().find(name); }

inline const pt::GroundedTask& preset_task(const std::string& domain, const std::string& preset) {
  return *bundle(domain).find_preset(preset)->task;
}

using StringState = std::set<std::string>;

inline std::string lit_text(const pt::Literal& l) {
  std::string s = "(" + l.predicate;
  for (const auto& a : l.args) s += " " + a;
  return s + ")";
}

inline pt::Literal substitute(const pt::Literal& l, const pt::ActionSchema& schema,
                              const std::vector<std::string>& args) {
  pt::Literal out{l.predicate, {}};
  for (const auto& v : l.args) {
    auto it = std::find_if(schema.params.begin(), schema.params.end(), [&](const pt::TypedName& p) { return p.name == v; });
    out.args.push_back(args[static_cast<std::size_t>(it - schema.params.begin())]);
  }
  return out;
}

// Straight from the schema text: pre, add, del as string sets.
struct NaiveAction {
  std::string text;
  StringState pre, add, del;
};

inline NaiveAction naive_action(const pt::Domain& d, const pt::PlanStep& step) {
  const pt::ActionSchema& s = *d.find_schema(step.schema);
  NaiveAction a;
  a.text = pt::to_text(step);
  for (const auto& l : s.precondition) a.pre.insert(lit_text(substitute(l, s, step.args)));
  for (const auto& l : s.add_effects) a.add.insert(lit_text(substitute(l, s, step.args)));
  for (const auto& l : s.del_effects) a.del.insert(lit_text(substitute(l, s, step.args)));
  return a;
}

inline StringState naive_apply(const StringState& s, const NaiveAction& a) {
  StringState out;
  for (const auto& x : s)
    if (!a.del.count(x)) out.insert(x);
  out.insert(a.add.begin(), a.add.end());
  return out;
}

inline StringState init_strings(const pt::Problem& p) {
  StringState s;
  for (const auto& l : p.init) s.insert(lit_text(l));
  return s;
}

struct NaiveReport {
  std::vector<bool> ok;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> failures;
  StringState final_state;
  StringState prefix_state;
};

// Skip-and-continue interpreter over strings.
inline NaiveReport naive_validate(const pt::Domain& d, const pt::Problem& p, const pt::Plan& plan) {
  NaiveReport r;
  StringState s = init_strings(p);
  bool intact = true;
  r.prefix_state = s;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    NaiveAction a = naive_action(d, plan[i]);
    std::vector<std::string> unmet;
    for (const auto& x : a.pre)
      if (!s.count(x)) unmet.push_back(x);
    if (unmet.empty()) {
      s = naive_apply(s, a);
      r.ok.push_back(true);
      if (intact) r.prefix_state = s;
    } else {
      r.ok.push_back(false);
      r.failures.push_back({i, unmet});
      intact = false;
    }
  }
  r.final_state = s;
  return r;
}

// Every well-typed instantiation of every schema, as plan steps.
inline std::vector<pt::PlanStep> all_typed_steps(const pt::Domain& d, const pt::Problem& p) {
  std::vector<pt::PlanStep> out;
  for (const auto& s : d.schemas) {
    std::vector<std::vector<std::string>> choices;
    for (const auto& param : s.params) {
      std::vector<std::string> c;
      for (const auto& o : p.objects)
        if (d.is_subtype(o.type, param.type)) c.push_back(o.name);
      choices.push_back(c);
    }
    std::vector<std::size_t> idx(choices.size(), 0);
    bool empty = std::any_of(choices.begin(), choices.end(), [](const auto& c) { return c.empty(); });
    while (!empty) {
      pt::PlanStep step{s.name, {}};
      for (std::size_t k = 0; k < idx.size(); ++k) step.args.push_back(choices[k][idx[k]]);
      out.push_back(step);
      std::size_t k = idx.size();
      while (k > 0) {
        --k;
        if (++idx[k] < choices[k].size()) break;
        idx[k] = 0;
        if (k == 0) empty = true;
      }
      if (idx.empty()) break;
    }
  }
  return out;
}

// Steps applicable in some state: uses all_typed_steps and the naive semantics.
inline std::vector<NaiveAction> applicable_in(const std::vector<NaiveAction>& all, const StringState& s) {
  std::vector<NaiveAction> out;
  for (const auto& a : all)
    if (std::includes(s.begin(), s.end(), a.pre.begin(), a.pre.end())) out.push_back(a);
  return out;
}

// Breadth-first distances over string states from init; stops at max_depth.
inline std::map<StringState, std::size_t> bfs_distances(const pt::Domain& d, const pt::Problem& p,
                                                        std::size_t max_depth) {
  std::vector<NaiveAction> all;
  for (const auto& step : all_typed_steps(d, p)) all.push_back(naive_action(d, step));
  std::map<StringState, std::size_t> dist;
  std::deque<StringState> q;
  StringState s0 = init_strings(p);
  dist[s0] = 0;
  q.push_back(s0);
  while (!q.empty()) {
    StringState s = q.front();
    q.pop_front();
    if (dist[s] == max_depth) continue;
    for (const auto& a : applicable_in(all, s)) {
      StringState n = naive_apply(s, a);
      if (dist.emplace(n, dist[s] + 1).second) q.push_back(n);
    }
  }
  return dist;
}

// Shortest plan length to any state containing all goal literals.
inline std::optional<std::size_t> bfs_optimal_length(const pt::Domain& d, const pt::Problem& p) {
  StringState goal;
  for (const auto& l : p.goal) goal.insert(lit_text(l));
  std::optional<std::size_t> best;
  for (const auto& [s, depth] : bfs_distances(d, p, 64))
    if (std::includes(s.begin(), s.end(), goal.begin(), goal.end()) && (!best || depth < *best)) best = depth;
  return best;
}

// Uniformly random plan over all typed steps (mostly inapplicable ones).
inline pt::Plan random_plan(const std::vector<pt::PlanStep>& steps, std::size_t max_len, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> len(0, max_len), pick(0, steps.size() - 1);
  pt::Plan plan;
  for (std::size_t n = len(rng); n > 0; --n) plan.push_back(steps[pick(rng)]);
  return plan;
}

// Random plan biased towards applicable steps: each step is applicable in the
// naive working state with probability about 3/4.
inline pt::Plan random_walk_plan(const pt::Domain& d, const pt::Problem& p, std::size_t max_len, std::mt19937_64& rng) {
  auto steps = all_typed_steps(d, p);
  std::vector<NaiveAction> all;
  for (const auto& st : steps) all.push_back(naive_action(d, st));
  std::uniform_int_distribution<std::size_t> len(0, max_len), pick(0, steps.size() - 1);
  std::bernoulli_distribution valid(0.75);
  StringState s = init_strings(p);
  pt::Plan plan;
  for (std::size_t n = len(rng); n > 0; --n) {
    std::vector<std::size_t> ok;
    for (std::size_t i = 0; i < all.size(); ++i)
      if (std::includes(s.begin(), s.end(), all[i].pre.begin(), all[i].pre.end())) ok.push_back(i);
    std::size_t chosen = pick(rng);
    if (valid(rng) && !ok.empty()) chosen = ok[std::uniform_int_distribution<std::size_t>(0, ok.size() - 1)(rng)];
    plan.push_back(steps[chosen]);
    const auto& a = all[chosen];
    if (std::includes(s.begin(), s.end(), a.pre.begin(), a.pre.end())) s = naive_apply(s, a);
  }
  return plan;
}

inline std::vector<std::string> sorted(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

inline std::vector<std::string> as_vector(const StringState& s) { return {s.begin(), s.end()}; }

// The coffee shop plan whose third step fails: the robot picks the wrong can
// and then tries to place can_blue.
inline pt::Plan coffee_step3_failure() {
  return {{"move", {"fetch", "start", "counter"}},
          {"pick", {"counter", "can_red", "gripper", "fetch"}},
          {"place", {"counter", "can_blue", "gripper", "fetch"}}};
}

inline const char* kStep3Tldr =
    "The action at step 3 (Place at location 'counter' object 'can_blue' using gripper 'gripper' this robot 'fetch') "
    "could not be performed because 'gripper' is not holding 'can_blue'.";

}  // namespace testing_support
