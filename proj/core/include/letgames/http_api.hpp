// SPDX-License-Identifier: Apache-2.0
//
// REST front end of the session service (JSON over HTTP).
//
//   POST /sessions                 {profile, target_domain, method?, seed?}
//   POST /sessions/{id}/actions    {action, latency_seconds, idempotency_key?}
//   GET  /sessions/{id}
//   GET  /sessions/{id}/report
//   POST /batch/simulate           {profiles | cohort, method?, seed?, domains?, parallelism?}
//   POST /evaluate                 {records | session_ids, parallelism?}
//
// Failures come back as {"error": {"code", "message"}}: 400 for a body that is
// not JSON, 422 for validation errors, 404 for unknown sessions, 409 for an
// ended session or a report that is not ready, 502 when a model call fails.
#pragma once

#include <atomic>
#include <memory>
#include <string>

#include "letgames/domain.hpp"
#include "letgames/eval.hpp"
#include "letgames/session.hpp"

namespace letgames {

struct ApiResponse {
  int status = 200;
  Json body = Json::object();
};

/// HTTP status for an engine error code.
int http_status_for(ErrorCode code);

class HttpApi {
 public:
  /// `judge_gateway` serves POST /evaluate with `evaluator` as the judge model.
  HttpApi(SessionService& sessions, LlmGateway& judge_gateway, ModelConfig evaluator = ModelConfig::evaluator());
  ~HttpApi();

  /// Routes one request without a socket. Headers other than the idempotency
  /// key are not consulted.
  ApiResponse handle(const std::string& method, const std::string& path, const std::string& body,
                     const std::string& idempotency_key = "") const;

  /// Binds and serves until stop(). Returns false when the port cannot be bound.
  bool listen(const std::string& host, int port);
  /// Binds an ephemeral port and returns it (-1 on failure); then call listen_after_bind().
  int bind_any_port(const std::string& host);
  bool listen_after_bind();
  void stop();

 private:
  struct Server;
  SessionService& sessions_;
  LlmGateway& judge_gateway_;
  ModelConfig evaluator_;
  std::unique_ptr<Server> server_;
};

}  // namespace letgames
