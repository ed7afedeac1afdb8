#include <gtest/gtest.h>

#include <chrono>

#include "support.hpp"

namespace pt = plantutor;
using namespace testing_support;
using namespace std::chrono_literals;

namespace {

const char* kChain = R"(
(define (domain chain)
  (:requirements :strips :typing)
  (:types node)
  (:predicates (at ?n - node) (edge ?a ?b - node) (key) (door))
  (:action step :parameters (?a ?b - node)
    :precondition (and (at ?a) (edge ?a ?b)) :effect (and (at ?b) (not (at ?a))))
  (:action grab :parameters () :precondition (and (key)) :effect (and (door))))
)";

pt::GroundedTask chain_task(const std::string& init, const std::string& goal) {
  pt::Domain d = pt::parse_domain(kChain);
  return pt::GroundedTask(d, pt::parse_problem("(define (problem c) (:domain chain) (:objects n0 n1 n2 n3 - node)"
                                               " (:init " + init + ") (:goal (and " + goal + ")))", d));
}

std::vector<pt::GroundAction> actions_of(const pt::GroundedTask& t, const std::vector<std::size_t>& plan) {
  std::vector<pt::GroundAction> out;
  for (auto i : plan) out.push_back(t.actions()[i]);
  return out;
}

}  // namespace

TEST(AdditiveHeuristic, CountsChainLengths) {
  auto t = chain_task("(at n0) (edge n0 n1) (edge n1 n2) (edge n2 n3)", "(at n3)");
  pt::AdditiveHeuristic h(t);
  // h(at n1)=1, h(at n2)=2, h(at n3)=3 along the only chain.
  EXPECT_EQ(h(t.init()), 3);
  auto t2 = chain_task("(at n0) (edge n0 n1) (edge n1 n2) (edge n2 n3)", "(at n2) (at n3)");
  EXPECT_EQ(pt::AdditiveHeuristic(t2)(t2.init()), 5);
  auto t3 = chain_task("(at n0) (edge n0 n1)", "(door)");
  EXPECT_EQ(pt::AdditiveHeuristic(t3)(t3.init()), std::nullopt);
}

TEST(Search, UnsolvableDetected) {
  auto t = chain_task("(at n0) (edge n0 n1)", "(at n3)");
  EXPECT_EQ(pt::plan_search(t, t.init(), 1s).status, pt::SearchStatus::unsolvable);
}

TEST(Search, GoalAlreadyTrue) {
  auto t = chain_task("(at n0)", "(at n0)");
  auto r = pt::plan_search(t, t.init(), 1s);
  EXPECT_EQ(r.status, pt::SearchStatus::solved);
  EXPECT_TRUE(r.plan.empty());
}

TEST(Search, ZeroTimeoutReportsTimeout) {
  const auto& t = preset_task("hanoi", "p01_three_discs");
  auto r = pt::plan_search(t, t.init(), 0ns);
  EXPECT_EQ(r.status, pt::SearchStatus::timeout);
}

TEST(Search, StopTokenCancels) {
  const auto& t = preset_task("hanoi", "p01_three_discs");
  std::stop_source src;
  src.request_stop();
  EXPECT_EQ(pt::plan_search(t, t.init(), 10s, src.get_token()).status, pt::SearchStatus::timeout);
}

TEST(Search, HanoiBreadthFirstIsOptimal) {
  const auto& b = bundle("hanoi");
  const auto& t = preset_task("hanoi", "p01_three_discs");
  auto oracle = bfs_optimal_length(b.domain, t.problem());
  ASSERT_TRUE(oracle);
  EXPECT_EQ(*oracle, 7u);
  auto r = pt::best_first_search(t, t.init(), pt::ZeroHeuristic{}, std::chrono::steady_clock::now() + 10s);
  ASSERT_EQ(r.status, pt::SearchStatus::solved);
  EXPECT_EQ(r.plan.size(), *oracle);
  auto v = pt::validate(t, actions_of(t, r.plan));
  EXPECT_TRUE(v.is_valid && v.goal_achieved);
}

TEST(Search, GreedyPlansReplayOnEveryPreset) {
  for (const char* name : {"coffee_shop", "hanoi"}) {
    const auto& b = bundle(name);
    for (const auto& p : b.presets) {
      auto r = pt::plan_search(*p.task, p.task->init(), 5s);
      ASSERT_EQ(r.status, pt::SearchStatus::solved) << p.id;
      auto v = pt::validate(*p.task, actions_of(*p.task, r.plan));
      EXPECT_TRUE(v.is_valid && v.goal_achieved) << p.id;
      auto optimal = bfs_optimal_length(b.domain, p.task->problem());
      ASSERT_TRUE(optimal);
      EXPECT_GE(r.plan.size(), *optimal) << p.id;
    }
  }
}

TEST(Search, FromIntermediateState) {
  const auto& t = preset_task("hanoi", "p01_three_discs");
  auto v = pt::validate(t, pt::Plan{{"move", {"d1", "d2", "peg3"}}});
  auto r = pt::plan_search(t, v.trace.back(), 5s);
  ASSERT_EQ(r.status, pt::SearchStatus::solved);
  pt::State s = v.trace.back();
  for (auto i : r.plan) s = pt::apply(s, t.actions()[i]);
  EXPECT_TRUE(pt::satisfies(s, t.goal()));
}
