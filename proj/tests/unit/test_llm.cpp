// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "letgames/error.hpp"
#include "letgames/llm.hpp"
#include "letgames/schemas.hpp"
#include "test_support.hpp"

using namespace letgames;
using namespace letgames::testing;

namespace {

const std::string kHintId{schema::kHint};

std::string valid_hint() {
  return Json{{"hint_level", "L1"},
              {"hint_text", "Rosa mentioned something about breakfast."},
              {"encouragement", "Take your time."},
              {"cognitive_strategy", "association"},
              {"wait_before_next", 20}}
      .dump();
}

ChatRequest request(const std::string& text) {
  ChatRequest r;
  r.system = "system";
  r.messages = {{"user", text}};
  return r;
}

}  // namespace

TEST(Gateway, ValidFirstReplyTakesOneAttempt) {
  auto provider = std::make_shared<ScriptedProvider>(std::vector<ScriptEntry>{valid_hint()});
  auto gw = quick_gateway(provider);
  const auto resp = gw->complete_structured(request("hi"), kHintId);
  EXPECT_EQ(resp.attempts, 1);
  ASSERT_TRUE(resp.parsed_document);
  EXPECT_EQ((*resp.parsed_document)["hint_level"], "L1");
}

TEST(Gateway, MalformedThenValidTakesTwoAttempts) {
  auto provider = std::make_shared<ScriptedProvider>(std::vector<ScriptEntry>{"not json at all", valid_hint()});
  auto gw = quick_gateway(provider);
  const auto resp = gw->complete_structured(request("hi"), kHintId);
  EXPECT_EQ(resp.attempts, 2);
  const auto reqs = provider->requests();
  ASSERT_EQ(reqs.size(), 2u);
  // The retry carries the rejected reply and a corrective message.
  ASSERT_EQ(reqs[1].messages.size(), 3u);
  EXPECT_EQ(reqs[1].messages[1].role, "assistant");
  EXPECT_EQ(reqs[1].messages[2].role, "user");
}

TEST(Gateway, InvalidRepliesExhaustTheBudget) {
  ModelConfig cfg;
  std::vector<ScriptEntry> script(static_cast<std::size_t>(cfg.max_retries) + 1, ScriptEntry("{\"hint_level\": 9}"));
  auto provider = std::make_shared<ScriptedProvider>(script);
  auto gw = quick_gateway(provider);
  try {
    (void)gw->complete_structured(request("hi"), kHintId);
    FAIL() << "expected SCHEMA_EXHAUSTED";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::schema_exhausted);
  }
  EXPECT_EQ(provider->requests().size(), static_cast<std::size_t>(cfg.max_retries) + 1);
  EXPECT_EQ(provider->remaining(), 0u);
}

TEST(Gateway, TransportFailuresRetryWithBackoff) {
  auto provider = std::make_shared<ScriptedProvider>(
      std::vector<ScriptEntry>{ScriptEntry::failure(), ScriptEntry::failure(), valid_hint()});
  std::vector<double> sleeps;
  LlmGateway gw(provider, SchemaRegistry::builtin(), 1, [&](std::chrono::duration<double> d) { sleeps.push_back(d.count()); });
  const auto resp = gw.complete_structured(request("hi"), kHintId);
  EXPECT_EQ(resp.attempts, 3);
  ASSERT_EQ(sleeps.size(), 2u);
  EXPECT_DOUBLE_EQ(sleeps[1], 2 * sleeps[0]);
}

TEST(Gateway, TransportExhaustedIsProviderUnavailable) {
  auto provider = std::make_shared<ScriptedProvider>(std::vector<ScriptEntry>(4, ScriptEntry::failure()));
  auto gw = quick_gateway(provider);
  try {
    (void)gw->complete_structured(request("hi"), kHintId);
    FAIL() << "expected PROVIDER_UNAVAILABLE";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::provider_unavailable);
  }
}

TEST(Gateway, UnknownSchemaIsRejected) {
  auto gw = quick_gateway(std::make_shared<ScriptedProvider>());
  try {
    (void)gw->complete_structured(request("hi"), "no_such_schema");
    FAIL() << "expected UNKNOWN_SCHEMA";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::unknown_schema);
  }
}

TEST(Gateway, ExtraCheckTriggersCorrectiveRetry) {
  auto provider = std::make_shared<ScriptedProvider>(std::vector<ScriptEntry>{valid_hint(), valid_hint()});
  auto gw = quick_gateway(provider);
  int calls = 0;
  const auto resp = gw->complete_structured(request("hi"), kHintId, [&](const Json&) {
    return ++calls == 1 ? std::vector<std::string>{"first reply rejected"} : std::vector<std::string>{};
  });
  EXPECT_EQ(resp.attempts, 2);
}

TEST(ScriptedProvider, ServesScriptThenRunsOut) {
  ScriptedProvider p({"a", "b", "c"});
  for (const char* expected : {"a", "b", "c"}) EXPECT_EQ(p.complete(request(expected)).text, expected);
  try {
    (void)p.complete(request("d"));
    FAIL() << "expected SCRIPT_EXHAUSTED";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::script_exhausted);
  }
}

TEST(ScriptedProvider, RecordsRequestsInOrder) {
  ScriptedProvider p({"1", "2"});
  (void)p.complete(request("first"));
  (void)p.complete(request("second"));
  const auto reqs = p.requests();
  ASSERT_EQ(reqs.size(), 2u);
  EXPECT_EQ(reqs[0].messages[0].text, "first");
  EXPECT_EQ(reqs[1].messages[0].text, "second");
}

TEST(ScriptedProvider, EmptyScriptWithoutCallsIsFine) {
  ScriptedProvider p;
  EXPECT_EQ(p.remaining(), 0u);
  EXPECT_TRUE(p.requests().empty());
}

TEST(RoutedScriptProvider, RoutesBySchemaAndFallsBack) {
  auto routed = std::make_shared<RoutedScriptProvider>(synthetic());
  routed->push(kHintId, valid_hint());
  auto gw = quick_gateway(routed);
  (void)gw->complete_structured(request("{}"), kHintId);
  EXPECT_EQ(routed->remaining(kHintId), 0u);
  EXPECT_EQ(routed->requests_for(kHintId).size(), 1u);
  // No queue left: the synthetic fallback answers.
  ChatRequest r = request(Json{{"hint_level", "L1"}, {"sub_task", {{"phase", "none"}}}}.dump());
  EXPECT_NO_THROW((void)gw->complete_structured(r, kHintId));
}

TEST(ExtractJson, ToleratesFencesAndProse) {
  const auto doc = extract_json("Sure! ```json\n{\"a\": 1}\n``` hope that helps");
  ASSERT_TRUE(doc);
  EXPECT_EQ((*doc)["a"], 1);
  EXPECT_FALSE(extract_json("no braces here"));
}

TEST(ModelConfig, DefaultsAreValid) {
  EXPECT_TRUE(ModelConfig::game_agent().violations().empty());
  EXPECT_TRUE(ModelConfig::evaluator().violations().empty());
  ModelConfig bad;
  bad.temperature = -1;
  EXPECT_FALSE(bad.violations().empty());
}
