// SPDX-License-Identifier: Apache-2.0
#include "letgames/cognition.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "agent_util.hpp"
#include "letgames/archive.hpp"
#include "letgames/schemas.hpp"

namespace letgames {

int step_difficulty(int ct_score, int current) {
  current = std::clamp(current, 1, 5);
  if (ct_score >= kRaiseAtScore) return std::min(current + 1, 5);
  if (ct_score < kLowerBelowScore) return std::max(current - 1, 1);
  return current;
}

int ct_score(const CognitionReport& report) {
  auto it = report.scores.find(report.target_domain);
  return it == report.scores.end() ? 0 : it->second;
}

double failure_rate(const SessionRecord& record) {
  if (record.turns.empty()) return 0.0;
  const auto failed = std::count_if(record.turns.begin(), record.turns.end(),
                                    [](const TurnRecord& t) { return !t.turn_output.is_action_successful; });
  return static_cast<double>(failed) / static_cast<double>(record.turns.size());
}

CognitionTracker::CognitionTracker(LlmGateway& gateway, PsychologyPolicy policy, ModelConfig config)
    : gateway_(gateway), policy_(std::move(policy)), config_(std::move(config)) {}

namespace {

Json transcript(const SessionRecord& record) {
  Json turns = Json::array();
  for (const auto& t : record.turns) {
    Json row{{"action", t.player_action},
             {"narrative", t.turn_output.narrative},
             {"is_action_successful", t.turn_output.is_action_successful},
             {"is_question_moment", t.turn_output.is_question_moment}};
    if (t.turn_output.npc_dialogue) row["npc_dialogue"] = *t.turn_output.npc_dialogue;
    if (t.turn_output.task_update) row["task_update"] = encode(*t.turn_output.task_update);
    if (t.hint) row["hint_level"] = t.hint->level;
    turns.push_back(std::move(row));
  }
  return turns;
}

}  // namespace

CognitionReport CognitionTracker::score_session(const SessionRecord& record,
                                                const std::vector<CognitionReport>& history) const {
  if (record.turns.empty()) {
    throw Error(ErrorCode::tracking_failed, "session " + record.session_id + " has no turns to score");
  }
  Json sub_tasks = Json::array();
  if (record.spec) {
    for (const auto& t : record.spec->sub_tasks) {
      sub_tasks.push_back({{"task_id", t.task_id},
                           {"description", t.description},
                           {"cognitive_function", t.cognitive_function},
                           {"phase", t.phase},
                           {"expected_recall", t.expected_recall ? Json(*t.expected_recall) : Json(nullptr)}});
    }
  }
  Json earlier = Json::array();
  for (const auto& h : history) {
    earlier.push_back({{"session_id", h.session_id}, {"scores", encode(h).at("cognitive_scores")}});
  }
  Json ctx{{"session_id", record.session_id},
           {"target_domain", record.target_domain},
           {"scenario_name", record.spec ? Json(record.spec->scenario_name) : Json(nullptr)},
           {"sub_tasks", sub_tasks},
           {"turns", transcript(record)},
           {"previous_reports", earlier}};
  auto req = detail::agent_request(prompts::kCognitionTracker, schema::kCognitionReport, std::move(ctx), config_);
  const CognitiveDomain target = record.target_domain;
  auto check = [&](const Json& doc) {
    return detail::decode_then<CognitionReport>(doc, [&](const CognitionReport& r) {
      std::vector<std::string> v;
      if (!r.scores.count(target)) {
        v.push_back("cognitive_scores: must include the target domain " + std::string(enum_name(target)));
      }
      auto scan = [&](std::string_view field, const std::string& s) {
        for (auto& x : lexicon_violations(field, s, policy_, true)) v.push_back(std::move(x));
      };
      for (const auto& [d, s] : r.friendly_feedback) scan("friendly_feedback." + std::string(enum_name(d)), s);
      for (const auto& s : r.strengths) scan("strengths", s);
      for (const auto& s : r.areas_for_improvement) scan("areas_for_improvement", s);
      for (const auto& s : r.recommendations) scan("recommendations", s);
      scan("encouragement", r.encouragement);
      scan("progress_analysis", r.progress_analysis);
      return v;
    });
  };
  CognitionReport report;
  try {
    auto resp = gateway_.complete_structured(std::move(req), std::string(schema::kCognitionReport), check);
    report = decode<CognitionReport>(*resp.parsed_document);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::schema_exhausted || e.code() == ErrorCode::provider_unavailable) {
      throw Error(ErrorCode::tracking_failed, e.what());
    }
    throw;
  }
  report.session_id = record.session_id;
  report.profile_id = record.profile_id;
  report.target_domain = record.target_domain;
  report.difficulty_played = record.spec ? record.spec->difficulty_level : 3;
  report.next_difficulty = step_difficulty(ct_score(report), report.difficulty_played);
  report.failure_rate = failure_rate(record);
  return report;
}

LongitudinalStore::LongitudinalStore(std::filesystem::path root) : root_(std::move(root)) {}

std::filesystem::path LongitudinalStore::file_for(const std::string& profile_id) const {
  return root_ / "reports" / (safe_file_stem(profile_id) + ".jsonl");
}

void LongitudinalStore::append(const CognitionReport& report) {
  std::lock_guard lock(mu_);
  append_jsonl(file_for(report.profile_id), encode(report));
}

std::vector<CognitionReport> LongitudinalStore::load(const std::string& profile_id) const {
  std::lock_guard lock(mu_);
  std::vector<CognitionReport> out;
  for (const auto& doc : read_jsonl(file_for(profile_id))) out.push_back(decode<CognitionReport>(doc));
  return out;
}

std::string render_trajectory(const std::vector<CognitionReport>& reports) {
  std::ostringstream os;
  os << "session                  domain               CT  played  next\n";
  for (const auto& r : reports) {
    std::string sid = r.session_id.substr(0, 24);
    std::string dom(enum_name(r.target_domain));
    sid.resize(24, ' ');
    dom.resize(20, ' ');
    os << sid << " " << dom << " " << (ct_score(r) < 100 ? " " : "") << (ct_score(r) < 10 ? " " : "") << ct_score(r)
       << "  " << r.difficulty_played << "       " << r.next_difficulty;
    if (r.next_difficulty > r.difficulty_played) os << " (up)";
    if (r.next_difficulty < r.difficulty_played) os << " (down)";
    os << "\n";
  }
  return os.str();
}

}  // namespace letgames
