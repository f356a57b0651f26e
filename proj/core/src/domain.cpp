// SPDX-License-Identifier: Apache-2.0
#include "letgames/domain.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

namespace letgames {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "INVALID_ARGUMENT";
    case ErrorCode::parse_error: return "PARSE_ERROR";
    case ErrorCode::not_found: return "NOT_FOUND";
    case ErrorCode::stale_task_id: return "STALE_TASK_ID";
    case ErrorCode::unknown_entity: return "UNKNOWN_ENTITY";
    case ErrorCode::provider_unavailable: return "PROVIDER_UNAVAILABLE";
    case ErrorCode::schema_exhausted: return "SCHEMA_EXHAUSTED";
    case ErrorCode::script_exhausted: return "SCRIPT_EXHAUSTED";
    case ErrorCode::unknown_schema: return "UNKNOWN_SCHEMA";
    case ErrorCode::design_failed: return "DESIGN_FAILED";
    case ErrorCode::control_failed: return "CONTROL_FAILED";
    case ErrorCode::critique_failed: return "CRITIQUE_FAILED";
    case ErrorCode::empty_suggestions: return "EMPTY_SUGGESTIONS";
    case ErrorCode::hint_failed: return "HINT_FAILED";
    case ErrorCode::tracking_failed: return "TRACKING_FAILED";
    case ErrorCode::empty_candidates: return "EMPTY_CANDIDATES";
    case ErrorCode::game_ended: return "GAME_ENDED";
    case ErrorCode::sim_failed: return "SIM_FAILED";
    case ErrorCode::channel_closed: return "CHANNEL_CLOSED";
    case ErrorCode::judge_failed: return "JUDGE_FAILED";
    case ErrorCode::empty_target: return "EMPTY_TARGET";
    case ErrorCode::empty_input: return "EMPTY_INPUT";
    case ErrorCode::session_ended: return "SESSION_ENDED";
    case ErrorCode::io_error: return "IO_ERROR";
  }
  return "UNKNOWN";
}

const std::vector<CognitiveDomain>& all_domains() {
  static const std::vector<CognitiveDomain> domains = [] {
    std::vector<CognitiveDomain> out;
    for (const auto& [d, name] : EnumNames<CognitiveDomain>::values) out.push_back(d);
    return out;
  }();
  return domains;
}

const std::vector<CognitiveDomain>& default_active_domains() {
  static const std::vector<CognitiveDomain> domains{
      CognitiveDomain::memory, CognitiveDomain::attention, CognitiveDomain::verbal_learning,
      CognitiveDomain::executive_function, CognitiveDomain::social_cognition};
  return domains;
}

CognitiveDomain parse_domain(std::string_view name) {
  if (auto d = enum_parse<CognitiveDomain>(name)) return *d;
  // Short form used in several prompt outputs.
  if (name == "executive") return CognitiveDomain::executive_function;
  throw Error(ErrorCode::invalid_argument, "unknown cognitive domain '" + std::string(name) + "'");
}

EmotionTier tier_of(EmotionState state) {
  switch (state) {
    case EmotionState::calm:
    case EmotionState::engaged:
    case EmotionState::excited:
      return EmotionTier::positive;
    case EmotionState::mild_anxiety:
    case EmotionState::confused:
      return EmotionTier::attention;
    case EmotionState::frustrated:
    case EmotionState::fatigued:
    case EmotionState::anxious:
      return EmotionTier::intervention;
  }
  return EmotionTier::positive;
}

bool requires_three_phases(CognitiveDomain domain) {
  return domain == CognitiveDomain::memory || domain == CognitiveDomain::verbal_learning;
}

std::vector<std::string> profile_violations(const PatientProfile& profile) {
  std::vector<std::string> out;
  if (profile.id.empty()) out.emplace_back("id is empty");
  if (profile.age <= 0) out.emplace_back("age must be positive");
  if (profile.healthy() && profile.depression_comorbid) {
    out.emplace_back("healthy profiles cannot carry comorbid depression");
  }
  return out;
}

std::vector<std::string> record_violations(const SessionRecord& record) {
  std::vector<std::string> out;
  if (record.session_id.empty()) out.emplace_back("session_id is empty");
  if (record.terminated && *record.terminated != Termination::abandoned && record.turns.empty()) {
    out.emplace_back("completed session has no turns");
  }
  // ISO-8601 strings of equal shape compare chronologically.
  if (!record.started_at.empty() && !record.ended_at.empty() && record.ended_at < record.started_at) {
    out.emplace_back("ended_at precedes started_at");
  }
  if (record.method == Method::letgames && !record.spec) out.emplace_back("letgames record without spec");
  if (record.method == Method::reme && !record.reme) out.emplace_back("reme record without game descriptor");
  for (const auto& turn : record.turns) {
    if (turn.wall_clock_latency < 0) {
      out.emplace_back("negative latency");
      break;
    }
  }
  return out;
}

std::string utc_timestamp_now() {
  const auto now = std::chrono::system_clock::now();
  const auto secs = std::chrono::time_point_cast<std::chrono::seconds>(now);
  const auto millis = std::chrono::duration_cast<std::chrono::milliseconds>(now - secs).count();
  const std::time_t t = std::chrono::system_clock::to_time_t(secs);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1,
                tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(millis));
  return buf;
}

}  // namespace letgames
