#include <gtest/gtest.h>

#include "support.hpp"

namespace pt = plantutor;
using namespace testing_support;

TEST(Explainer, Step3TemplateExplanationIsByteExact) {
  const auto& b = bundle("coffee_shop");
  const auto& t = preset_task("coffee_shop", "p02_deliver_two");
  auto r = pt::validate(t, coffee_step3_failure());
  ASSERT_EQ(r.failures.size(), 1u);
  auto e = pt::explain_failure(t, r.failures[0], b.semantics);
  EXPECT_EQ(e.tldr, kStep3Tldr);
  EXPECT_EQ(e.step, 3u);
  EXPECT_EQ(e.action_nl, "Place at location 'counter' object 'can_blue' using gripper 'gripper' this robot 'fetch'");
  EXPECT_EQ(e.reasons, (std::vector<std::string>{"'gripper' is not holding 'can_blue'"}));
  EXPECT_EQ(e.source, pt::ExplanationSource::template_text);
  EXPECT_FALSE(e.detailed);
}

TEST(Explainer, SeveralReasonsJoinedWithAnd) {
  const auto& b = bundle("coffee_shop");
  const auto& t = preset_task("coffee_shop", "p01_deliver_red");
  auto r = pt::validate(t, pt::Plan{{"pick", {"counter", "can_red", "gripper", "fetch"}}});
  ASSERT_EQ(r.failures.size(), 1u);
  auto e = pt::explain_failure(t, r.failures[0], b.semantics);
  EXPECT_EQ(e.tldr,
            "The action at step 1 (Pick at location 'counter' object 'can_red' using gripper 'gripper' this robot "
            "'fetch') could not be performed because robot 'fetch' is not at 'counter'.");
}

TEST(Explainer, ObjectDisplayNamesAndFallbackTemplates) {
  const auto& t = preset_task("coffee_shop", "p01_deliver_red");
  auto r = pt::validate(t, pt::Plan{{"move", {"fetch", "counter", "start"}}});
  ASSERT_EQ(r.failures.size(), 1u);
  auto e = pt::explain_failure(t, r.failures[0], bundle("coffee_shop").semantics);
  EXPECT_EQ(e.action_nl, "Move the robot fetch from the counter to the starting point");
  EXPECT_EQ(e.reasons, (std::vector<std::string>{"robot 'fetch' is not at 'counter'"}));

  pt::SemanticMap bare = pt::SemanticMap::fallback(t.domain());
  auto plain = pt::explain_failure(t, r.failures[0], bare);
  EXPECT_EQ(plain.reasons, (std::vector<std::string>{"precondition (robot_at fetch counter) is false"}));
}

TEST(Explainer, DetailRequestedForFirstTwoOnly) {
  const auto& b = bundle("hanoi");
  const auto& t = preset_task("hanoi", "p01_three_discs");
  pt::Plan plan{{"move", {"d3", "peg1", "peg2"}},
                {"move", {"d1", "d2", "peg3"}},
                {"move", {"d2", "d3", "peg3"}},
                {"move", {"d2", "d3", "peg2"}},
                {"move", {"d3", "peg1", "d1"}}};
  auto r = pt::validate(t, plan);
  std::vector<std::size_t> asked;
  auto detail = [&](const pt::Explanation& e) -> std::optional<std::string> {
    asked.push_back(e.step);
    return "friendly " + std::to_string(e.step);
  };
  auto ex = pt::explanations_for_report(t, r, b.semantics, detail);
  ASSERT_EQ(ex.size(), 3u);
  EXPECT_EQ(asked, (std::vector<std::size_t>{1, 3}));
  EXPECT_EQ(ex[0].detailed, "friendly 1");
  EXPECT_EQ(ex[1].source, pt::ExplanationSource::llm);
  EXPECT_FALSE(ex[2].detailed);
  EXPECT_EQ(ex[2].source, pt::ExplanationSource::template_text);
  for (const auto& e : ex) EXPECT_FALSE(e.tldr.empty());
}

TEST(Explainer, FallbackWhenDetailUnavailable) {
  const auto& b = bundle("coffee_shop");
  const auto& t = preset_task("coffee_shop", "p02_deliver_two");
  auto r = pt::validate(t, coffee_step3_failure());
  auto ex = pt::explanations_for_report(t, r, b.semantics,
                                        [](const pt::Explanation&) -> std::optional<std::string> { return std::nullopt; });
  ASSERT_EQ(ex.size(), 1u);
  EXPECT_FALSE(ex[0].detailed);
  EXPECT_EQ(ex[0].tldr, kStep3Tldr);
}

TEST(Explainer, RejectsFailureWithoutUnmetPreconditions) {
  const auto& t = preset_task("hanoi", "p01_three_discs");
  pt::Failure f{0, t.actions().front(), {}};
  EXPECT_THROW(pt::explain_failure(t, f, bundle("hanoi").semantics), std::invalid_argument);
}
