#include <gtest/gtest.h>

#include <fstream>

#include "support.hpp"

namespace pt = plantutor;
using namespace testing_support;

namespace {

// Copies a bundle to a scratch directory so a test can break it.
std::filesystem::path scratch_copy(const std::string& name, const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("plantutor_env_" + tag) / name;
  std::filesystem::remove_all(dir.parent_path());
  std::filesystem::create_directories(dir.parent_path());
  std::filesystem::copy(env_dir() / name, dir, std::filesystem::copy_options::recursive);
  return dir;
}

std::string load_error(const std::filesystem::path& dir) {
  try {
    pt::load_bundle(dir);
  } catch (const pt::ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Bundles, BothRegister) {
  auto names = registry().list();
  ASSERT_EQ(names.size(), 2u);
  EXPECT_EQ(names[0]->name, "coffee_shop");
  EXPECT_EQ(names[1]->name, "hanoi");
  EXPECT_EQ(bundle("coffee_shop").presets.size(), 3u);
  EXPECT_EQ(bundle("coffee_shop").semantics.display("start"), "starting point");
}

TEST(Bundles, MissingSemanticMapIsRejected) {
  auto dir = scratch_copy("hanoi", "nosem");
  std::filesystem::remove(dir / "semantics.map");
  EXPECT_NE(load_error(dir).find("missing semantics.map"), std::string::npos);
  std::filesystem::remove_all(dir.parent_path());
}

TEST(Bundles, BrokenReferencePlanIsRejected) {
  auto dir = scratch_copy("hanoi", "badplan");
  std::ofstream(dir / "problems" / "p01_three_discs.plan") << "(move d1 d2 peg3)\n(move d1 peg3 peg2)\n(move d3 peg1 peg3)\n";
  auto err = load_error(dir);
  EXPECT_NE(err.find("reference plan for 'p01_three_discs' fails at step 3"), std::string::npos) << err;
  std::filesystem::remove_all(dir.parent_path());
}

TEST(Bundles, SemanticMapMustCoverSchemas) {
  auto dir = scratch_copy("coffee_shop", "partialsem");
  std::ofstream(dir / "semantics.map") << "action move: Move {0} to {2}\n";
  auto err = load_error(dir);
  EXPECT_NE(err.find("pick"), std::string::npos) << err;
  std::filesystem::remove_all(dir.parent_path());
}

TEST(Bundles, ReferencePlansMatchOracle) {
  for (const char* name : {"coffee_shop", "hanoi"}) {
    const auto& b = bundle(name);
    for (const auto& p : b.presets) {
      NaiveReport n = naive_validate(b.domain, p.task->problem(), p.reference_plan);
      EXPECT_TRUE(n.failures.empty()) << p.id;
      for (const auto& g : p.task->problem().goal) EXPECT_TRUE(n.final_state.count(lit_text(g))) << p.id;
    }
  }
}

// No reachable state within depth 10 stacks a larger disc on a smaller one.
TEST(Bundles, HanoiNeverStacksLargerOnSmaller) {
  const auto& b = bundle("hanoi");
  const auto& t = *b.base().task;
  auto states = bfs_distances(b.domain, t.problem(), 10);
  // Disc size order from the numbering d1 < d2 < d3.
  std::set<std::string> forbidden;
  for (int big = 1; big <= 3; ++big)
    for (int small = 1; small < big; ++small)
      forbidden.insert("(on d" + std::to_string(big) + " d" + std::to_string(small) + ")");
  for (const auto& [s, _] : states)
    for (const auto& f : forbidden) EXPECT_FALSE(s.count(f)) << f;
  EXPECT_EQ(states.size(), 27u);
}

TEST(Bundles, CoffeeGripperHoldsOneCan) {
  const auto& b = bundle("coffee_shop");
  const auto& t = *b.base().task;
  for (const auto& [s, _] : bfs_distances(b.domain, t.problem(), 12)) {
    int held = 0;
    for (const auto& atom : s) held += atom.rfind("(holding ", 0) == 0;
    EXPECT_LE(held, 1);
  }
}
