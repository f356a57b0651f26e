// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <httplib.h>

#include <thread>

#include "letgames/http_api.hpp"
#include "test_support.hpp"

using namespace letgames;
using namespace letgames::testing;

namespace {

class Api : public ::testing::Test {
 protected:
  Api() {
    SessionConfig cfg;
    cfg.data_dir = dir.path();
    cfg.id_nonce = 5;
    cfg.reme_candidates = RemeCandidates::load(data_path("reme_candidates.json"));
    svc = std::make_unique<SessionService>(*gw, cfg);
    api = std::make_unique<HttpApi>(*svc, *gw);
  }

  std::string create(Method method = Method::letgames) {
    const Json body{{"profile", Json(sample_profile())},
                    {"target_domain", "memory"},
                    {"method", std::string(enum_name(method))},
                    {"seed", 3}};
    const auto res = api->handle("POST", "/sessions", body.dump());
    EXPECT_EQ(res.status, 201) << res.body.dump();
    return res.body.value("session_id", "");
  }

  static std::string error_code(const ApiResponse& r) { return r.body["error"].value("code", ""); }

  TempDir dir;
  std::unique_ptr<LlmGateway> gw = quick_gateway(synthetic());
  std::unique_ptr<SessionService> svc;
  std::unique_ptr<HttpApi> api;
};

}  // namespace

TEST_F(Api, CreateReturnsTheOpening) {
  const Json body{{"profile", Json(sample_profile())}, {"target_domain", "memory"}};
  const auto res = api->handle("POST", "/sessions", body.dump());
  ASSERT_EQ(res.status, 201);
  EXPECT_EQ(res.body["status"], "awaiting_action");
  EXPECT_TRUE(res.body["opening"].contains("narrative"));
}

TEST_F(Api, MalformedBodyIs400) {
  EXPECT_EQ(api->handle("POST", "/sessions", "{not json").status, 400);
  EXPECT_EQ(api->handle("POST", "/sessions", "[1,2]").status, 400);
}

TEST_F(Api, ValidationErrorsAre422) {
  EXPECT_EQ(api->handle("POST", "/sessions", Json{{"target_domain", "memory"}}.dump()).status, 422);
  const Json bad_domain{{"profile", Json(sample_profile())}, {"target_domain", "juggling"}};
  EXPECT_EQ(api->handle("POST", "/sessions", bad_domain.dump()).status, 422);
  const std::string id = create();
  EXPECT_EQ(api->handle("POST", "/sessions/" + id + "/actions", Json{{"action", "  "}}.dump()).status, 422);
  const Json negative{{"action", "Look around"}, {"latency_seconds", -1}};
  EXPECT_EQ(api->handle("POST", "/sessions/" + id + "/actions", negative.dump()).status, 422);
}

TEST_F(Api, UnknownSessionAndRouteAre404) {
  EXPECT_EQ(api->handle("GET", "/sessions/missing", "").status, 404);
  EXPECT_EQ(error_code(api->handle("GET", "/sessions/missing", "")), "NOT_FOUND");
  EXPECT_EQ(api->handle("POST", "/sessions/missing/actions", Json{{"action", "hi"}}.dump()).status, 404);
  EXPECT_EQ(api->handle("GET", "/nowhere", "").status, 404);
}

TEST_F(Api, ActionsReportAndEndedSession) {
  const std::string id = create();
  const auto turn = api->handle("POST", "/sessions/" + id + "/actions",
                                Json{{"action", "Look around"}, {"latency_seconds", 3}}.dump());
  ASSERT_EQ(turn.status, 200) << turn.body.dump();
  EXPECT_EQ(turn.body["turn_index"], 1);

  EXPECT_EQ(api->handle("GET", "/sessions/" + id + "/report", "").status, 409);
  const auto quit = api->handle("POST", "/sessions/" + id + "/actions", Json{{"action", "quit"}}.dump());
  ASSERT_EQ(quit.status, 200);
  EXPECT_TRUE(quit.body["ended"].get<bool>());
  const auto again = api->handle("POST", "/sessions/" + id + "/actions", Json{{"action", "Look around"}}.dump());
  EXPECT_EQ(again.status, 409);
  EXPECT_EQ(error_code(again), "SESSION_ENDED");
  const int report = api->handle("GET", "/sessions/" + id + "/report", "").status;
  EXPECT_TRUE(report == 200 || report == 404);
}

TEST_F(Api, IdempotencyHeaderReplaysTheTurn) {
  const std::string id = create();
  const Json body{{"action", "Look around"}, {"latency_seconds", 2}};
  const auto a = api->handle("POST", "/sessions/" + id + "/actions", body.dump(), "key-1");
  const auto b = api->handle("POST", "/sessions/" + id + "/actions", body.dump(), "key-1");
  EXPECT_EQ(a.body, b.body);
  EXPECT_EQ(svc->record(id).turns.size(), 1u);
}

TEST_F(Api, SessionViewHidesRemeTarget) {
  const std::string id = create(Method::reme);
  const auto view = api->handle("GET", "/sessions/" + id, "");
  ASSERT_EQ(view.status, 200);
  EXPECT_FALSE(view.body["record"]["reme"].contains("target"));
}

TEST_F(Api, BatchThenEvaluate) {
  const Json batch{{"profiles", Json::array({Json(impaired_profile(CognitiveDomain::memory, Severity::mild))})},
                   {"seed", 8}};
  const auto sim = api->handle("POST", "/batch/simulate", batch.dump());
  ASSERT_EQ(sim.status, 200) << sim.body.dump();
  EXPECT_EQ(sim.body["n"], 1);
  const Json eval{{"session_ids", sim.body["session_ids"]}};
  const auto res = api->handle("POST", "/evaluate", eval.dump());
  ASSERT_EQ(res.status, 200) << res.body.dump();
  EXPECT_EQ(res.body["report"]["n_records"], 1);
  EXPECT_NE(res.body["table"].get<std::string>().find("DoAl"), std::string::npos);
  EXPECT_EQ(api->handle("POST", "/evaluate", "{}").status, 422);
}

TEST(ApiStatus, ErrorCodeMapping) {
  EXPECT_EQ(http_status_for(ErrorCode::invalid_argument), 422);
  EXPECT_EQ(http_status_for(ErrorCode::not_found), 404);
  EXPECT_EQ(http_status_for(ErrorCode::session_ended), 409);
  EXPECT_EQ(http_status_for(ErrorCode::design_failed), 502);
}

TEST_F(Api, ServesOverARealSocket) {
  const int port = api->bind_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread server([&] { api->listen_after_bind(); });
  httplib::Client client("127.0.0.1", port);
  client.set_connection_timeout(5);
  const Json body{{"profile", Json(sample_profile())}, {"target_domain", "memory"}};
  auto created = client.Post("/sessions", body.dump(), "application/json");
  ASSERT_TRUE(created);
  EXPECT_EQ(created->status, 201);
  const std::string id = Json::parse(created->body).value("session_id", "");
  auto view = client.Get("/sessions/" + id);
  ASSERT_TRUE(view);
  EXPECT_EQ(view->status, 200);
  auto missing = client.Get("/sessions/none");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
  auto bad = client.Post("/sessions", "{", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
  api->stop();
  server.join();
}
