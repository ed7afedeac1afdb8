#include <gtest/gtest.h>

#include <unordered_set>

#include "support.hpp"

namespace pt = plantutor;
using namespace testing_support;

namespace {

// Grounding oracle: typed instantiations whose static preconditions hold in
// init. Static predicates are read off the schema effects directly.
std::set<std::string> expected_ground_actions(const pt::Domain& d, const pt::Problem& p) {
  std::set<std::string> dynamic;
  for (const auto& s : d.schemas) {
    for (const auto& l : s.add_effects) dynamic.insert(l.predicate);
    for (const auto& l : s.del_effects) dynamic.insert(l.predicate);
  }
  StringState init = init_strings(p);
  std::set<std::string> out;
  for (const auto& step : all_typed_steps(d, p)) {
    const auto& s = *d.find_schema(step.schema);
    bool ok = true;
    for (const auto& l : s.precondition)
      if (!dynamic.count(l.predicate) && !init.count(lit_text(substitute(l, s, step.args)))) ok = false;
    if (ok) out.insert(pt::to_text(step));
  }
  return out;
}

std::set<std::string> ground_action_texts(const pt::GroundedTask& t) {
  std::set<std::string> out;
  for (const auto& a : t.actions()) out.insert(t.action_text(a));
  return out;
}

}  // namespace

TEST(State, ApplyDeletesThenAdds) {
  pt::State s({{0, {1}}, {1, {0}}});
  pt::GroundAction a;
  a.pre = {{0, {1}}};
  a.add = {{2, {0, 1}}};
  a.del = {{0, {1}}};
  pt::State next = pt::apply(s, a);
  EXPECT_EQ(next, pt::State({{1, {0}}, {2, {0, 1}}}));
  EXPECT_FALSE(pt::is_applicable(next, a));
  EXPECT_THROW(pt::apply(next, a), pt::InapplicableAction);
  EXPECT_EQ(pt::unmet_preconditions(next, a), (std::vector<pt::Atom>{{0, {1}}}));
}

TEST(State, CanonicalFormIgnoresOrderAndDuplicates) {
  pt::State a({{2, {0}}, {1, {3}}, {2, {0}}});
  pt::State b({{1, {3}}, {2, {0}}});
  EXPECT_EQ(a, b);
  EXPECT_EQ(pt::StateHash{}(a), pt::StateHash{}(b));
  EXPECT_EQ(a.size(), 2u);
  std::unordered_set<pt::State, pt::StateHash> set{a, b};
  EXPECT_EQ(set.size(), 1u);
}

TEST(Grounding, HanoiMatchesOracle) {
  const auto& b = bundle("hanoi");
  const auto& t = preset_task("hanoi", "p01_three_discs");
  auto expected = expected_ground_actions(b.domain, t.problem());
  EXPECT_EQ(ground_action_texts(t), expected);
  // 3 discs x 6 possible sources x the targets each disc is smaller than.
  EXPECT_EQ(t.actions().size(), 72u);
  EXPECT_EQ(t.init().size(), 18u);
}

TEST(Grounding, CoffeeShopMatchesOracle) {
  const auto& b = bundle("coffee_shop");
  for (const auto& p : b.presets) {
    auto expected = expected_ground_actions(b.domain, p.task->problem());
    EXPECT_EQ(ground_action_texts(*p.task), expected) << p.id;
  }
}

TEST(Grounding, ActionIndicesAreStable) {
  const auto& t = preset_task("hanoi", "p01_three_discs");
  for (std::size_t i = 0; i < t.actions().size(); ++i) EXPECT_EQ(t.actions()[i].index, i);
  // Lexicographic order of argument tuples within one schema.
  for (std::size_t i = 1; i < t.actions().size(); ++i)
    EXPECT_LT(t.actions()[i - 1].args, t.actions()[i].args);
}

TEST(Grounding, InstantiateKeepsStaticallyImpossibleSteps) {
  const auto& t = preset_task("hanoi", "p01_three_discs");
  std::vector<std::string> args{"d3", "peg1", "d1"};
  pt::GroundAction a = t.instantiate("move", args);
  EXPECT_EQ(a.index, pt::kNotGrounded);
  auto unmet = pt::unmet_preconditions(t.init(), a);
  std::vector<std::string> texts;
  for (const auto& u : unmet) texts.push_back(t.atom_text(u));
  EXPECT_EQ(sorted(texts), (std::vector<std::string>{"(clear d3)", "(smaller d3 d1)"}));
}

TEST(Grounding, InstantiateRejectsUnknownNames) {
  const auto& t = preset_task("hanoi", "p01_three_discs");
  std::vector<std::string> bad_obj{"d9", "peg1", "peg2"};
  EXPECT_THROW(t.instantiate("move", bad_obj), pt::ResolveError);
  std::vector<std::string> ok{"d1", "d2", "peg2"};
  EXPECT_THROW(t.instantiate("jump", ok), pt::ResolveError);
  std::vector<std::string> short_args{"d1"};
  EXPECT_THROW(t.instantiate("move", short_args), pt::ResolveError);
  // A peg is not a disc.
  std::vector<std::string> ill_typed{"peg1", "d1", "d2"};
  EXPECT_THROW(t.instantiate("move", ill_typed), pt::ResolveError);
}

TEST(Grounding, ParseAtomRoundTrips) {
  const auto& t = preset_task("coffee_shop", "p01_deliver_red");
  for (const auto& a : t.init().atoms()) EXPECT_EQ(t.parse_atom(t.atom_text(a)), a);
  EXPECT_THROW(t.parse_atom("(robot_at fetch)"), pt::ResolveError);
  EXPECT_THROW(t.parse_atom("(flying fetch)"), pt::ResolveError);
}

TEST(Grounding, WithGoalReplacesOnlyTheGoal) {
  const auto& t = preset_task("coffee_shop", "p01_deliver_red");
  std::vector<pt::Atom> goal{t.parse_atom("(robot_at fetch counter)")};
  pt::GroundedTask g = t.with_goal(goal);
  EXPECT_EQ(g.init(), t.init());
  EXPECT_EQ(g.actions().size(), t.actions().size());
  EXPECT_EQ(g.goal(), goal);
  EXPECT_EQ(g.problem().goal, (std::vector<pt::Literal>{{"robot_at", {"fetch", "counter"}}}));
}
