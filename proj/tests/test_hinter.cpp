#include <gtest/gtest.h>

#include "support.hpp"

namespace pt = plantutor;
using namespace testing_support;
using namespace std::chrono_literals;

namespace {

// A coffee shop variant whose move schema is called move_to_counter and
// takes (from, robot, to), with the matching block label.
pt::GroundedTask move_to_counter_task() {
  pt::Domain d = pt::parse_domain(R"(
    (define (domain cafe)
      (:requirements :strips :typing)
      (:types robot location)
      (:predicates (robot_at ?r - robot ?l - location))
      (:action move_to_counter
        :parameters (?from - location ?r - robot ?to - location)
        :precondition (and (robot_at ?r ?from))
        :effect (and (robot_at ?r ?to) (not (robot_at ?r ?from)))))
  )");
  return pt::GroundedTask(d, pt::parse_problem(R"(
    (define (problem go) (:domain cafe)
      (:objects fetch - robot start counter - location)
      (:init (robot_at fetch start))
      (:goal (and (robot_at fetch counter))))
  )", d));
}

pt::SemanticMap move_to_counter_semantics() {
  return pt::SemanticMap::parse(
      "action move_to_counter: Move To Counter from this location {0} the robot {1} to this location {2}\n"
      "true robot_at: robot '{0}' is at '{1}'\n");
}

}  // namespace

TEST(HintMask, ExtremeProbabilitiesAreExact) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(pt::sample_mask(4, 0.0, rng), std::vector<bool>(4, false));
    EXPECT_EQ(pt::sample_mask(4, 1.0, rng), std::vector<bool>(4, true));
  }
}

TEST(HintMask, HalfProbabilityIsBalancedPerArgument) {
  std::mt19937_64 rng(2024);
  constexpr int kSamples = 10000;
  std::vector<int> shown(4, 0);
  for (int i = 0; i < kSamples; ++i) {
    auto m = pt::sample_mask(4, 0.5, rng);
    for (std::size_t k = 0; k < 4; ++k) shown[k] += m[k];
  }
  for (int c : shown) {
    double rate = static_cast<double>(c) / kSamples;
    EXPECT_GE(rate, 0.48);
    EXPECT_LE(rate, 0.52);
  }
}

TEST(HintMask, SeededSamplingIsReproducible) {
  std::mt19937_64 a(5), b(5);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(pt::sample_mask(3, 0.5, a), pt::sample_mask(3, 0.5, b));
}

TEST(HintText, SampleHintFormat) {
  auto t = move_to_counter_task();
  auto m = move_to_counter_semantics();
  std::vector<std::string> args{"start", "fetch", "counter"};
  auto a = t.instantiate("move_to_counter", args);
  EXPECT_EQ(pt::hint_text(t, a, {false, false, true}, m),
            "You might want to try the action: Move To Counter from this location ? the robot ? to this location counter");
}

TEST(Hinter, HintFollowsThePlanner) {
  auto t = move_to_counter_task();
  pt::HintConfig cfg;
  cfg.reveal_probability = 1.0;
  std::mt19937_64 rng(0);
  auto r = pt::next_hint(t, t.init(), move_to_counter_semantics(), cfg, rng);
  ASSERT_EQ(r.status, pt::HintStatus::ok);
  EXPECT_EQ(r.hint->text,
            "You might want to try the action: Move To Counter from this location start the robot fetch to this location "
            "counter");
  EXPECT_EQ(r.hint->visible, std::vector<bool>(3, true));
}

TEST(Hinter, StatusesForSolvedUnsolvableAndTimeout) {
  const auto& b = bundle("hanoi");
  const auto& t = preset_task("hanoi", "p01_three_discs");
  pt::HintConfig cfg;
  cfg.rng_seed = 3;
  // Goal already reached.
  auto ref = pt::validate(t, b.find_preset("p01_three_discs")->reference_plan);
  EXPECT_EQ(pt::next_hint(t, ref.trace.back(), b.semantics, cfg).status, pt::HintStatus::already_solved);
  EXPECT_STREQ(pt::status_code(pt::HintStatus::already_solved), "already-solved");
  EXPECT_STREQ(pt::status_code(pt::HintStatus::timeout), "hint-timeout");

  // A goal no move can reach: d3 on d1 contradicts the size order.
  std::vector<pt::Atom> impossible{t.parse_atom("(on d3 d1)")};
  auto bad = t.with_goal(impossible);
  EXPECT_EQ(pt::next_hint(bad, bad.init(), b.semantics, cfg).status, pt::HintStatus::unsolvable);

  std::stop_source cancelled;
  cancelled.request_stop();
  std::mt19937_64 rng(0);
  EXPECT_EQ(pt::next_hint(t, t.init(), b.semantics, cfg, rng, cancelled.get_token()).status, pt::HintStatus::timeout);
}

TEST(Hinter, HanoiStartHintsMoveOfSmallestDisc) {
  const auto& b = bundle("hanoi");
  const auto& t = preset_task("hanoi", "p01_three_discs");
  pt::HintConfig cfg;
  cfg.reveal_probability = 1.0;
  cfg.rng_seed = 11;
  auto r = pt::next_hint(t, t.init(), b.semantics, cfg);
  ASSERT_EQ(r.status, pt::HintStatus::ok);
  EXPECT_EQ(r.hint->action.schema, "move");
  EXPECT_TRUE(pt::is_applicable(t.init(), r.hint->action));
  // Only d1 is clear at the start.
  EXPECT_EQ(t.object_name(r.hint->action.args[0]), "d1");
}

TEST(Hinter, ConfigValidation) {
  pt::HintConfig cfg;
  cfg.reveal_probability = 1.5;
  EXPECT_THROW(cfg.check(), std::invalid_argument);
  cfg.reveal_probability = 0.5;
  cfg.timeout = 0ms;
  EXPECT_THROW(cfg.check(), std::invalid_argument);
}
