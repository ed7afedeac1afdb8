#pragma once
//
// Forward state-space search for hints: greedy best-first search guided by
// the additive delete-relaxation heuristic (h_add), with duplicate detection
// and a wall-clock deadline. The heuristic is a template parameter; with
// ZeroHeuristic the queue order degenerates to (g, insertion) and the search
// returns shortest plans.
//

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <stop_token>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "plantutor/state.hpp"
#include "plantutor/task.hpp"

namespace plantutor {

// h_add: cost of an atom is 0 if true, else min over achievers of
// 1 + sum of precondition costs; the estimate sums goal atom costs.
class AdditiveHeuristic {
 public:
  explicit AdditiveHeuristic(const GroundedTask& task) {
    auto id_of = [&](const Atom& a) {
      auto [it, inserted] = ids_.emplace(a, static_cast<std::uint32_t>(ids_.size()));
      return it->second;
    };
    for (const auto& g : task.goal()) goal_.push_back(id_of(g));
    for (const auto& a : task.actions()) {
      Relaxed r;
      for (const auto& p : a.pre) r.pre.push_back(id_of(p));
      for (const auto& e : a.add) r.add.push_back(id_of(e));
      actions_.push_back(std::move(r));
    }
  }

  // nullopt when some goal atom is unreachable even under the relaxation.
  std::optional<long> operator()(const State& s) const {
    std::vector<long> cost(ids_.size(), kInf);
    for (const auto& a : s.atoms())
      if (auto it = ids_.find(a); it != ids_.end()) cost[it->second] = 0;
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& a : actions_) {
        long c = 1;
        for (auto p : a.pre) {
          if (cost[p] == kInf) {
            c = kInf;
            break;
          }
          c += cost[p];
        }
        if (c == kInf) continue;
        for (auto e : a.add) {
          if (c < cost[e]) {
            cost[e] = c;
            changed = true;
          }
        }
      }
    }
    long h = 0;
    for (auto g : goal_) {
      if (cost[g] == kInf) return std::nullopt;
      h += cost[g];
    }
    return h;
  }

 private:
  static constexpr long kInf = std::numeric_limits<long>::max();
  struct Relaxed {
    std::vector<std::uint32_t> pre;
    std::vector<std::uint32_t> add;
  };
  std::unordered_map<Atom, std::uint32_t, AtomHash> ids_;
  std::vector<Relaxed> actions_;
  std::vector<std::uint32_t> goal_;
};

struct ZeroHeuristic {
  std::optional<long> operator()(const State&) const { return 0; }
};

enum class SearchStatus { solved, timeout, unsolvable };

struct SearchResult {
  SearchStatus status = SearchStatus::unsolvable;
  std::vector<std::size_t> plan;  // indices into GroundedTask::actions()
  std::size_t expanded = 0;
};

template <class Heuristic>
SearchResult best_first_search(const GroundedTask& task, const State& from, const Heuristic& heuristic,
                               std::chrono::steady_clock::time_point deadline, std::stop_token stop = {}) {
  SearchResult result;
  if (satisfies(from, task.goal())) {
    result.status = SearchStatus::solved;
    return result;
  }
  struct Node {
    State state;
    std::size_t parent;
    std::size_t action;
    long g;
  };
  struct Entry {
    long h;
    long g;
    std::uint64_t seq;
    std::size_t node;
    bool operator>(const Entry& o) const {
      if (h != o.h) return h > o.h;
      if (g != o.g) return g > o.g;
      return seq > o.seq;
    }
  };
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  std::vector<Node> nodes;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::unordered_set<State, StateHash> seen;
  std::uint64_t seq = 0;

  auto h0 = heuristic(from);
  if (!h0) return result;
  nodes.push_back({from, kNone, kNone, 0});
  seen.insert(from);
  open.push({*h0, 0, seq++, 0});

  while (!open.empty()) {
    if (std::chrono::steady_clock::now() >= deadline || stop.stop_requested()) {
      result.status = SearchStatus::timeout;
      return result;
    }
    Entry top = open.top();
    open.pop();
    ++result.expanded;
    const State current = nodes[top.node].state;
    const long g = nodes[top.node].g;
    for (const auto& a : task.actions()) {
      if (!is_applicable(current, a)) continue;
      State next = apply_unchecked(current, a.add, a.del);
      if (!seen.insert(next).second) continue;
      nodes.push_back({next, top.node, a.index, g + 1});
      std::size_t id = nodes.size() - 1;
      if (satisfies(next, task.goal())) {
        for (std::size_t n = id; nodes[n].parent != kNone; n = nodes[n].parent) result.plan.push_back(nodes[n].action);
        std::reverse(result.plan.begin(), result.plan.end());
        result.status = SearchStatus::solved;
        return result;
      }
      auto h = heuristic(nodes[id].state);
      if (!h) continue;
      open.push({*h, g + 1, seq++, id});
    }
  }
  return result;
}

// Hint planner entry point: greedy best-first search with h_add.
inline SearchResult plan_search(const GroundedTask& task, const State& from, std::chrono::nanoseconds timeout,
                                std::stop_token stop = {}) {
  auto deadline = std::chrono::steady_clock::now() + timeout;
  AdditiveHeuristic h(task);
  return best_first_search(task, from, h, deadline, stop);
}

}  // namespace plantutor
