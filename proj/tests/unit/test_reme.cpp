// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "letgames/error.hpp"
#include "letgames/reme.hpp"
#include "letgames/text.hpp"
#include "test_support.hpp"

using namespace letgames;
using namespace letgames::testing;

namespace {

const std::string kRemeId{schema::kRemeAnswer};

const RemeCandidates& fixture() {
  static const RemeCandidates c = RemeCandidates::load(data_path("reme_candidates.json"));
  return c;
}

RemeGame bicycle_game() {
  const RemeItem* item = fixture().find("vehicles", "bicycle");
  if (item == nullptr) throw std::runtime_error("fixture lacks vehicles/bicycle");
  RemeGame g;
  g.category = "vehicles";
  g.target = *item;
  return g;
}

Json yes_no(bool yes) {
  return Json{{"thoughts", yes ? "true of the object" : "not true of the object"},
              {"outputs", yes ? "Yes." : "No."},
              {"is_end", false}};
}

bool leaks(const RemeGame& g, const std::string& s) {
  if (text::contains_ci(s, g.target.name)) return true;
  for (const auto& syn : g.target.synonyms) {
    if (text::contains_ci(s, syn)) return true;
  }
  return false;
}

}  // namespace

TEST(RemeFixture, HasThirtyCategoriesOfTenItems) {
  EXPECT_GE(fixture().categories.size(), 30u);
  for (const auto& [category, items] : fixture().categories) EXPECT_GE(items.size(), 10u) << category;
}

TEST(RemeStart, SameSeedSameGame) {
  const auto a = reme_start(fixture(), 7);
  const auto b = reme_start(fixture(), 7);
  EXPECT_EQ(a.category, b.category);
  EXPECT_EQ(a.target, b.target);
}

TEST(RemeStart, TargetComesFromTheFixture) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto g = reme_start(fixture(), seed);
    EXPECT_NE(fixture().find(g.category, g.target.name), nullptr);
    EXPECT_TRUE(g.history.empty());
    EXPECT_FALSE(g.ended);
  }
}

TEST(RemeStart, SpreadsAcrossCategories) {
  std::set<std::string> seen;
  for (std::uint64_t seed = 0; seed < 400; ++seed) seen.insert(reme_start(fixture(), seed).category);
  EXPECT_GE(seen.size(), fixture().categories.size() * 3 / 4);
}

TEST(RemeStart, EmptyFixtureFails) {
  try {
    (void)reme_start(RemeCandidates::from_json(Json::object()), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::empty_candidates);
  }
}

TEST(RemeClassifiers, HintWordsAreWholeWordAndCaseInsensitive) {
  EXPECT_TRUE(is_hint_request("Can you give me more clues?"));
  EXPECT_TRUE(is_hint_request("HELP"));
  EXPECT_TRUE(is_hint_request("a hint please"));
  EXPECT_FALSE(is_hint_request("Is it helpful in the kitchen?"));
  EXPECT_FALSE(is_hint_request("Does it have a chintz cover?"));
  EXPECT_TRUE(is_open_question("What is the first letter of its name?"));
  EXPECT_FALSE(is_open_question("Does it have any wheels?"));
  const auto g = bicycle_game();
  EXPECT_TRUE(names_target(g, "I guess it is a bike."));
  EXPECT_TRUE(names_target(g, "Is it a Bicycle?"));
  EXPECT_FALSE(names_target(g, "Is it a motorbike?"));
}

TEST(RemeEngine, CaseStudyTranscript) {
  auto routed = std::make_shared<RoutedScriptProvider>();
  routed->push_json(kRemeId, yes_no(false));  // in the sky
  routed->push_json(kRemeId, yes_no(true));   // wheels
  routed->push_json(kRemeId, yes_no(false));  // more than two wheels
  auto gw = quick_gateway(routed);
  RemeEngine engine(*gw);
  RemeGame g = bicycle_game();
  std::vector<std::string> emitted{reme_opening(g)};
  EXPECT_NE(emitted[0].find("vehicles"), std::string::npos);

  auto step = [&](const std::string& input) {
    auto [next, reply] = engine.answer(g, input);
    g = next;
    emitted.push_back(reply.outputs);
    return reply;
  };

  auto r = step("Is it in the sky?");
  EXPECT_EQ(r.kind, RemeReplyKind::answer);
  EXPECT_EQ(r.outputs, "No");

  r = step("What is the first letter of its name?");
  EXPECT_EQ(r.kind, RemeReplyKind::redirect);
  EXPECT_EQ(r.outputs.rfind("I can only answer yes or no", 0), 0u);

  r = step("Okay. Does it have any wheels?");
  EXPECT_EQ(r.outputs, "Yes");
  r = step("Does it have more than two wheels?");
  EXPECT_EQ(r.outputs, "No");

  r = step("I am stuck. Can you give me more clues?");
  EXPECT_EQ(r.kind, RemeReplyKind::summary);
  EXPECT_EQ(r.outputs.rfind("Here is what we know so far", 0), 0u);
  EXPECT_NE(r.outputs.find("wheels"), std::string::npos);
  EXPECT_FALSE(r.is_end);

  for (const auto& out : emitted) EXPECT_FALSE(leaks(g, out)) << out;

  r = step("I guess it is a bike.");
  EXPECT_EQ(r.kind, RemeReplyKind::solved);
  EXPECT_TRUE(r.is_end);
  EXPECT_TRUE(g.ended);
  EXPECT_TRUE(g.solved);
  EXPECT_NE(r.outputs.find("bicycle"), std::string::npos);
  EXPECT_EQ(routed->requests_for(kRemeId).size(), 3u);
  EXPECT_THROW((void)engine.answer(g, "Is it red?"), Error);
}

TEST(RemeEngine, LeakingAnswerIsRetried) {
  auto routed = std::make_shared<RoutedScriptProvider>();
  routed->push_json(kRemeId, Json{{"thoughts", "x"}, {"outputs", "Yes, a bicycle has wheels."}, {"is_end", false}});
  routed->push_json(kRemeId, yes_no(true));
  auto gw = quick_gateway(routed);
  RemeEngine engine(*gw);
  const auto [g, reply] = engine.answer(bicycle_game(), "Does it have wheels?");
  EXPECT_EQ(reply.outputs, "Yes");
  EXPECT_EQ(routed->requests_for(kRemeId).size(), 2u);
}

TEST(RemeEngine, RunsOutOfQuestions) {
  auto gw = quick_gateway(synthetic());
  RemeEngine engine(*gw, ModelConfig::game_agent(), 3);
  RemeGame g = bicycle_game();
  RemeReply r;
  for (int i = 0; i < 3; ++i) std::tie(g, r) = engine.answer(g, "Is it soft?");
  EXPECT_EQ(r.kind, RemeReplyKind::out_of_questions);
  EXPECT_TRUE(r.is_end);
  EXPECT_FALSE(g.solved);
}

TEST(RemeEngine, SyntheticGamesNeverLeakBeforeTheEnd) {
  auto gw = quick_gateway(synthetic());
  RemeEngine engine(*gw);
  const std::vector<std::string> questions{"Is it alive?",    "Does it have wheels?", "Give me a hint",
                                           "What colour is it?", "Is it made of metal?", "Is it used outdoors?",
                                           "help",            "Is it found indoors?"};
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    RemeGame g = reme_start(fixture(), seed);
    for (const auto& q : questions) {
      auto [next, reply] = engine.answer(g, q);
      g = next;
      ASSERT_FALSE(reply.is_end) << seed << " " << g.target.name << ": " << q << " -> " << reply.outputs;
      EXPECT_FALSE(leaks(g, reply.outputs)) << g.target.name << ": " << reply.outputs;
    }
  }
}
