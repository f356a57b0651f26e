// SPDX-License-Identifier: Apache-2.0
#include "letgames/http_api.hpp"

#include <regex>

#include <spdlog/spdlog.h>

#include "httplib.h"
#include "letgames/codec.hpp"
#include "letgames/text.hpp"

namespace letgames {

int http_status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument:
    case ErrorCode::parse_error:
    case ErrorCode::empty_input:
    case ErrorCode::empty_target:
    case ErrorCode::empty_candidates:
      return 422;
    case ErrorCode::not_found:
      return 404;
    case ErrorCode::session_ended:
    case ErrorCode::game_ended:
      return 409;
    case ErrorCode::provider_unavailable:
    case ErrorCode::schema_exhausted:
    case ErrorCode::design_failed:
    case ErrorCode::control_failed:
    case ErrorCode::critique_failed:
    case ErrorCode::hint_failed:
    case ErrorCode::tracking_failed:
    case ErrorCode::sim_failed:
    case ErrorCode::judge_failed:
      return 502;
    default:
      return 500;
  }
}

namespace {

ApiResponse error_response(int status, std::string_view code, const std::string& message) {
  return ApiResponse{status, Json{{"error", {{"code", code}, {"message", message}}}}};
}

ApiResponse from_error(const Error& e) {
  return error_response(http_status_for(e.code()), error_code_name(e.code()), e.what());
}

template <typename T>
T required(const Json& body, const char* key) {
  if (!body.contains(key)) throw Error(ErrorCode::invalid_argument, std::string("missing field '") + key + "'");
  return decode<T>(body.at(key));
}

std::vector<PatientProfile> profiles_of(const Json& body) {
  std::vector<PatientProfile> out;
  if (body.contains("profiles")) return body["profiles"].get<std::vector<PatientProfile>>();
  if (body.contains("cohort")) {
    const Json& c = body["cohort"];
    for (const char* key : {"sps", "controls"}) {
      if (!c.contains(key)) continue;
      for (const auto& p : c[key]) out.push_back(decode<PatientProfile>(p));
    }
    return out;
  }
  throw Error(ErrorCode::invalid_argument, "provide 'profiles' or 'cohort'");
}

}  // namespace

struct HttpApi::Server {
  httplib::Server http;
};

HttpApi::HttpApi(SessionService& sessions, LlmGateway& judge_gateway, ModelConfig evaluator)
    : sessions_(sessions), judge_gateway_(judge_gateway), evaluator_(std::move(evaluator)) {}

HttpApi::~HttpApi() { stop(); }

ApiResponse HttpApi::handle(const std::string& method, const std::string& path, const std::string& body_text,
                            const std::string& idempotency_key) const {
  static const std::regex kSession(R"(^/sessions/([A-Za-z0-9._-]+)$)");
  static const std::regex kAction(R"(^/sessions/([A-Za-z0-9._-]+)/actions$)");
  static const std::regex kReport(R"(^/sessions/([A-Za-z0-9._-]+)/report$)");
  Json body = Json::object();
  if (method == "POST") {
    try {
      body = body_text.empty() ? Json::object() : Json::parse(body_text);
    } catch (const Json::exception& e) {
      return error_response(400, "BAD_REQUEST", std::string("body is not JSON: ") + e.what());
    }
    if (!body.is_object()) return error_response(400, "BAD_REQUEST", "body must be a JSON object");
  }
  std::smatch m;
  try {
    if (method == "POST" && path == "/sessions") {
      const auto profile = required<PatientProfile>(body, "profile");
      const auto domain = parse_domain(required<std::string>(body, "target_domain"));
      const auto method_name = body.value("method", std::string("letgames"));
      const auto which = enum_require<Method>(method_name, "method");
      const auto seed = body.value("seed", std::uint64_t{0});
      auto [handle, opening] = sessions_.create_session(profile, domain, which, seed);
      return ApiResponse{201, Json{{"session_id", handle.session_id},
                                   {"mode", enum_name(handle.mode)},
                                   {"status", enum_name(handle.status)},
                                   {"opening", encode(opening)}}};
    }
    if (method == "POST" && std::regex_match(path, m, kAction)) {
      const auto action = required<std::string>(body, "action");
      if (text::trim(action).empty()) throw Error(ErrorCode::empty_input, "action is empty");
      const double latency = body.value("latency_seconds", 0.0);
      const std::string key = body.value("idempotency_key", idempotency_key);
      return ApiResponse{200, sessions_.submit_action(m[1], action, latency, key).to_json()};
    }
    if (method == "GET" && std::regex_match(path, m, kSession)) {
      return ApiResponse{200, sessions_.session_view(m[1])};
    }
    if (method == "GET" && std::regex_match(path, m, kReport)) {
      const auto handle = sessions_.get_session(m[1]);
      if (handle.status != SessionStatus::ended) {
        return error_response(409, "SESSION_RUNNING", "the report is written when the session ends");
      }
      auto report = sessions_.report(m[1]);
      if (!report) return error_response(404, "NOT_FOUND", "no tracker report for this session");
      return ApiResponse{200, encode(*report)};
    }
    if (method == "POST" && path == "/batch/simulate") {
      const auto profiles = profiles_of(body);
      const auto which = enum_require<Method>(body.value("method", std::string("letgames")), "method");
      const auto seed = body.value("seed", std::uint64_t{42});
      std::vector<CognitiveDomain> domains = default_active_domains();
      if (body.contains("domains")) domains = body["domains"].get<std::vector<CognitiveDomain>>();
      Cohort cohort;
      for (const auto& p : profiles) (p.healthy() ? cohort.controls : cohort.sps).push_back(p);
      const auto records = sessions_.simulate_batch(batch_jobs(cohort, domains), which, seed,
                                                    body.value("parallelism", 1));
      Json ids = Json::array();
      for (const auto& r : records) ids.push_back(r.session_id);
      return ApiResponse{200, Json{{"n", records.size()}, {"session_ids", ids}, {"records", Json(records)}}};
    }
    if (method == "POST" && path == "/evaluate") {
      std::vector<SessionRecord> records;
      if (body.contains("records")) {
        records = body["records"].get<std::vector<SessionRecord>>();
      } else if (body.contains("session_ids")) {
        for (const auto& id : body["session_ids"]) records.push_back(sessions_.record(id.get<std::string>()));
      } else {
        throw Error(ErrorCode::invalid_argument, "provide 'records' or 'session_ids'");
      }
      const Judge judge(judge_gateway_, evaluator_, sessions_.config().agent_model.model_name);
      const auto run = evaluate_records(records, judge, body.value("parallelism", 4));
      return ApiResponse{200, Json{{"report", run.report.to_json()},
                                   {"judgments", Json(run.judgments)},
                                   {"failed_records", run.failed_records},
                                   {"table", render_metric_table(run.report)}}};
    }
  } catch (const Error& e) {
    return from_error(e);
  } catch (const Json::exception& e) {
    return error_response(422, "PARSE_ERROR", e.what());
  }
  return error_response(404, "NOT_FOUND", "no route for " + method + " " + path);
}

namespace {

void install_routes(httplib::Server& http, const HttpApi& api) {
  auto bridge = [&api](const httplib::Request& req, httplib::Response& res) {
    const auto out = api.handle(req.method, req.path, req.body, req.get_header_value("Idempotency-Key"));
    res.status = out.status;
    res.set_content(out.body.dump(), "application/json");
  };
  http.Post(R"(/.*)", bridge);
  http.Get(R"(/.*)", bridge);
}

}  // namespace

bool HttpApi::listen(const std::string& host, int port) {
  if (!server_) {
    server_ = std::make_unique<Server>();
    install_routes(server_->http, *this);
  }
  spdlog::info("[http] listening on {}:{}", host, port);
  return server_->http.listen(host, port);
}

int HttpApi::bind_any_port(const std::string& host) {
  server_ = std::make_unique<Server>();
  install_routes(server_->http, *this);
  return server_->http.bind_to_any_port(host);
}

bool HttpApi::listen_after_bind() { return server_ && server_->http.listen_after_bind(); }

void HttpApi::stop() {
  if (server_) server_->http.stop();
}

}  // namespace letgames
