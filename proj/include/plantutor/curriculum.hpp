#pragma once
//
// Adaptive curriculum.
//
// PerformanceMap holds one integer per action schema. A step the learner
// performs correctly without a hint raises the schema's cost; a failed or
// hinted step lowers it, clamped at zero. Zero means "not yet known".
//
// generate_adaptive_task runs a uniform-cost search from the initial state
// where an edge costs the current score of its schema. It stops at the first
// generated edge whose schema is still unknown (cost 0) or that reaches the
// depth cap, and turns the resulting state into a goal. Well practiced
// schemas are expensive, so the search prefers routes through weaker ones.
//

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "plantutor/state.hpp"
#include "plantutor/task.hpp"

namespace plantutor {

inline constexpr std::size_t kDefaultMaxDepth = 4;

class PerformanceMap {
 public:
  PerformanceMap() = default;
  explicit PerformanceMap(std::map<std::string, int> costs) : costs_(std::move(costs)) {
    for (const auto& [schema, c] : costs_)
      if (c < 0) throw std::invalid_argument("negative cost for schema '" + schema + "'");
  }

  // Cold start: every schema of the domain at zero.
  static PerformanceMap cold_start(const Domain& d) {
    std::map<std::string, int> costs;
    for (const auto& s : d.schemas) costs[s.name] = 0;
    return PerformanceMap(std::move(costs));
  }

  int cost(const std::string& schema) const {
    auto it = costs_.find(schema);
    if (it == costs_.end()) throw std::invalid_argument("unknown schema '" + schema + "'");
    return it->second;
  }

  bool contains(const std::string& schema) const { return costs_.count(schema) != 0; }
  const std::map<std::string, int>& costs() const { return costs_; }
  bool operator==(const PerformanceMap&) const = default;

  void set(const std::string& schema, int value) {
    cost(schema);
    costs_[schema] = value < 0 ? 0 : value;
  }

 private:
  std::map<std::string, int> costs_;
};

// One tracking step: applicable and unhinted raises the cost by one,
// anything else lowers it by one with a floor of zero.
inline PerformanceMap update_performance(PerformanceMap cu, const std::string& schema, bool applicable, bool hinted) {
  int c = cu.cost(schema);
  cu.set(schema, applicable && !hinted ? c + 1 : c - 1);
  return cu;
}

inline PerformanceMap update_performance(PerformanceMap cu, const std::string& schema, const State& s,
                                         const GroundAction& a, bool hinted) {
  return update_performance(std::move(cu), schema, is_applicable(s, a), hinted);
}

enum class Provenance { adaptive, random, preset };

inline const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::adaptive: return "adaptive";
    case Provenance::random: return "random";
    case Provenance::preset: return "preset";
  }
  return "preset";
}

struct Trigger {
  std::string schema;
  std::size_t depth = 0;

  bool operator==(const Trigger&) const = default;
};

struct GeneratedTask {
  std::vector<Atom> goal;  // atoms of the target state that are false in init
  Provenance provenance = Provenance::preset;
  std::optional<Trigger> trigger;
  std::size_t reference_plan_length = 0;
  std::vector<GroundAction> witness;  // path from init that reaches the goal
};

class GenerationError : public std::runtime_error {
 public:
  explicit GenerationError(const std::string& message, std::optional<std::size_t> max_depth = std::nullopt)
      : std::runtime_error(message), max_depth_(max_depth) {}

  // Set when a requested depth exceeds the reachable frontier.
  std::optional<std::size_t> max_depth() const { return max_depth_; }

 private:
  std::optional<std::size_t> max_depth_;
};

inline std::vector<Atom> delta_goal(const State& init, const State& target) {
  return set_difference(target.atoms(), init.atoms());
}

struct FringePop {
  long cost;
  std::size_t depth;
  std::uint64_t seq;
};

using FringeObserver = std::function<void(const FringePop&)>;

inline GeneratedTask generate_adaptive_task(const PerformanceMap& cu, const GroundedTask& task,
                                            std::size_t d_max = kDefaultMaxDepth,
                                            const FringeObserver& observer = {}) {
  if (d_max == 0) throw std::invalid_argument("maximum depth must be at least 1");
  const State& s0 = task.init();
  bool any = false;
  for (const auto& a : task.actions()) {
    cu.cost(a.schema);
    any = any || is_applicable(s0, a);
  }
  if (!any) throw GenerationError("generation impossible: no action is applicable in the initial state");

  struct Node {
    State state;
    long cost;
    std::size_t depth;
    std::size_t parent;
    std::size_t action;
  };
  struct Entry {
    long cost;
    std::uint64_t seq;
    std::size_t node;
    bool operator>(const Entry& o) const { return cost != o.cost ? cost > o.cost : seq > o.seq; }
  };
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  std::vector<Node> nodes{{s0, 0, 0, kNone, kNone}};
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> fringe;
  std::unordered_set<State, StateHash> visited{s0};
  std::uint64_t seq = 0;
  fringe.push({0, seq++, 0});

  while (!fringe.empty()) {
    Entry top = fringe.top();
    fringe.pop();
    const Node node = nodes[top.node];
    if (observer) observer({top.cost, node.depth, top.seq});
    for (const auto& a : task.actions()) {
      if (!is_applicable(node.state, a)) continue;
      State next = apply_unchecked(node.state, a.add, a.del);
      int action_cost = cu.cost(a.schema);
      long next_cost = node.cost + action_cost;
      std::size_t next_depth = node.depth + 1;
      if (action_cost == 0 || next_depth >= d_max) {
        GeneratedTask out;
        for (std::size_t n = top.node; nodes[n].parent != kNone; n = nodes[n].parent)
          out.witness.push_back(task.actions()[nodes[n].action]);
        std::reverse(out.witness.begin(), out.witness.end());
        out.witness.push_back(a);
        out.goal = delta_goal(s0, next);
        out.provenance = Provenance::adaptive;
        out.trigger = Trigger{a.schema, next_depth};
        out.reference_plan_length = out.witness.size();
        return out;
      }
      if (visited.insert(next).second) {
        nodes.push_back({std::move(next), next_cost, next_depth, top.node, a.index});
        fringe.push({next_cost, seq++, nodes.size() - 1});
      }
    }
  }
  throw GenerationError("generation impossible: state space exhausted before reaching an unknown action or depth " +
                        std::to_string(d_max));
}

// Equal-cost generator: breadth-first search to exactly `depth` levels and a
// uniformly sampled state of the last level as the target.
inline GeneratedTask generate_random_task(const GroundedTask& task, std::size_t depth, std::uint64_t seed) {
  if (depth == 0) throw std::invalid_argument("depth must be at least 1");
  struct Node {
    State state;
    std::size_t parent;
    std::size_t action;
  };
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<Node> nodes{{task.init(), kNone, kNone}};
  std::unordered_set<State, StateHash> visited{task.init()};
  std::vector<std::size_t> level{0};
  for (std::size_t d = 1; d <= depth; ++d) {
    std::vector<std::size_t> next_level;
    for (std::size_t id : level) {
      const State current = nodes[id].state;
      for (const auto& a : task.actions()) {
        if (!is_applicable(current, a)) continue;
        State next = apply_unchecked(current, a.add, a.del);
        if (!visited.insert(next).second) continue;
        nodes.push_back({std::move(next), id, a.index});
        next_level.push_back(nodes.size() - 1);
      }
    }
    if (next_level.empty())
      throw GenerationError("no state at depth " + std::to_string(depth) + "; maximum reachable depth is " +
                                std::to_string(d - 1),
                            d - 1);
    level = std::move(next_level);
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, level.size() - 1);
  std::size_t chosen = level[pick(rng)];

  GeneratedTask out;
  for (std::size_t n = chosen; nodes[n].parent != kNone; n = nodes[n].parent)
    out.witness.push_back(task.actions()[nodes[n].action]);
  std::reverse(out.witness.begin(), out.witness.end());
  out.goal = delta_goal(task.init(), nodes[chosen].state);
  out.provenance = Provenance::random;
  out.reference_plan_length = out.witness.size();
  return out;
}

// Replays a witness as if the learner performed every step correctly.
inline PerformanceMap practice(PerformanceMap cu, const GroundedTask& task, const std::vector<GroundAction>& steps) {
  State s = task.init();
  for (const auto& a : steps) {
    cu = update_performance(std::move(cu), a.schema, s, a, false);
    if (is_applicable(s, a)) s = apply_unchecked(s, a.add, a.del);
  }
  return cu;
}

// Training tasks for a test task of the given optimal length: each needs at
// most half as many actions (rounded up). Between tasks the learner is
// assumed to solve the previous task along its witness.
inline std::vector<GeneratedTask> training_task_series(PerformanceMap cu, const GroundedTask& task,
                                                       std::size_t test_task_length, std::size_t count = 3,
                                                       std::size_t d_max = kDefaultMaxDepth) {
  if (test_task_length < 2) throw std::invalid_argument("test task length must be at least 2");
  std::size_t cap = (test_task_length + 1) / 2;
  std::size_t depth = std::min(d_max, cap);
  std::vector<GeneratedTask> out;
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(generate_adaptive_task(cu, task, depth));
    cu = practice(std::move(cu), task, out.back().witness);
  }
  return out;
}

}  // namespace plantutor
