// SPDX-License-Identifier: Apache-2.0
#include "letgames/psychology.hpp"

#include <algorithm>
#include <fstream>

#include <spdlog/spdlog.h>

#include "agent_util.hpp"
#include "letgames/schemas.hpp"
#include "letgames/text.hpp"

namespace letgames {

PsychologyPolicy PsychologyPolicy::from_json(const Json& j) {
  PsychologyPolicy p;
  try {
    p.idle_threshold_seconds = j.value("idle_threshold_seconds", p.idle_threshold_seconds);
    p.hint_cooldown_seconds = j.value("hint_cooldown_seconds", p.hint_cooldown_seconds);
    p.reset_after_l3_failures = j.value("reset_after_l3_failures", p.reset_after_l3_failures);
    p.fatigue_minutes = j.value("fatigue_minutes", p.fatigue_minutes);
    p.forbidden_phrases = j.value("forbidden_phrases", p.forbidden_phrases);
    p.medical_terms = j.value("medical_terms", p.medical_terms);
    p.action_verbs = j.value("action_verbs", p.action_verbs);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("psychology policy: ") + e.what());
  }
  if (p.reset_after_l3_failures < 1) throw Error(ErrorCode::parse_error, "reset_after_l3_failures must be >= 1");
  return p;
}

PsychologyPolicy PsychologyPolicy::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot read " + path.string());
  std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json(parse_json(body));
}

Json PsychologyPolicy::to_json() const {
  return Json{{"idle_threshold_seconds", idle_threshold_seconds},
              {"hint_cooldown_seconds", hint_cooldown_seconds},
              {"reset_after_l3_failures", reset_after_l3_failures},
              {"fatigue_minutes", fatigue_minutes},
              {"forbidden_phrases", forbidden_phrases},
              {"medical_terms", medical_terms},
              {"action_verbs", action_verbs}};
}

std::optional<HintLevel> hint_gate(const HintContext& ctx, const PsychologyPolicy& policy) {
  if (ctx.just_succeeded) return std::nullopt;
  if (ctx.seconds_since_last_hint && *ctx.seconds_since_last_hint < policy.hint_cooldown_seconds) return std::nullopt;
  if (ctx.player_actively_exploring && ctx.consecutive_failures == 0 &&
      ctx.idle_seconds < policy.idle_threshold_seconds) {
    return std::nullopt;
  }
  const auto emo = ctx.current_emotion;
  if (ctx.consecutive_failures >= 3 || emo == EmotionState::frustrated || emo == EmotionState::anxious) {
    return HintLevel::L3;
  }
  if (ctx.consecutive_failures == 2 || emo == EmotionState::confused) return HintLevel::L2;
  if (ctx.idle_seconds >= policy.idle_threshold_seconds || ctx.consecutive_failures == 1) return HintLevel::L1;
  return std::nullopt;
}

Json encode_features(const EmotionFeatures& f) {
  return Json{{"performance",
               {{"success_rate", f.success_rate},
                {"recent_success_rate", f.recent_success_rate},
                {"hint_usage_count", f.hint_usage_count}}},
              {"behavior", {{"response_latency_seconds", f.response_latency_seconds}}},
              {"context", {{"game_duration_minutes", f.game_duration_minutes}, {"minutes_since_break", f.minutes_since_break}}},
              {"consecutive_failures", f.consecutive_failures},
              {"self_corrections", f.undo_count}};
}

namespace {

std::string default_intervention_text(InterventionType t) {
  switch (t) {
    case InterventionType::rest_suggestion:
      return "You have been playing for a while. Would you like a short break? We can pick up right where we left off.";
    case InterventionType::intensive:
      return "Let's pause the game for a moment. This part is a tricky one, and that is the task's doing, not yours. "
             "Would you like to try an easier version together?";
    case InterventionType::moderate:
      return "Let's slow down a little. There is no hurry at all; we can take this one step at a time.";
    case InterventionType::supportive:
      return "You are doing fine. Take all the time you need.";
    case InterventionType::preventive:
      return "Everything is going well. Let me know whenever you would like a hand.";
    case InterventionType::none:
      break;
  }
  return {};
}

}  // namespace

EmotionAssessment apply_emotion_floors(EmotionAssessment a, const EmotionFeatures& f, const PsychologyPolicy& policy) {
  if (f.consecutive_failures >= 3 && tier_of(a.state) != EmotionTier::intervention) {
    a.state = EmotionState::frustrated;
    a.indicators.push_back(std::to_string(f.consecutive_failures) + " failed attempts in a row");
  }
  if (f.game_duration_minutes > policy.fatigue_minutes && f.success_declining() && a.state != EmotionState::anxious &&
      a.state != EmotionState::fatigued) {
    a.state = EmotionState::fatigued;
    a.indicators.push_back("long session with falling results");
  }

  if (tier_of(a.state) == EmotionTier::intervention) {
    const auto iv = a.intervention;
    if (a.state == EmotionState::fatigued) {
      if (iv != InterventionType::rest_suggestion && iv != InterventionType::intensive) {
        a.intervention = InterventionType::rest_suggestion;
      }
      if (a.suggested_action == GameAdjustment::no_change) a.suggested_action = GameAdjustment::suggest_break;
    } else if (iv != InterventionType::moderate && iv != InterventionType::intensive &&
               iv != InterventionType::rest_suggestion) {
      a.intervention = a.state == EmotionState::frustrated ? InterventionType::intensive : InterventionType::moderate;
    }
    if (a.state == EmotionState::frustrated && a.suggested_action == GameAdjustment::no_change) {
      a.suggested_action = GameAdjustment::reduce_difficulty;
    }
    if (a.trend == EmotionTrend::improving) a.trend = EmotionTrend::declining;
  }
  if (a.intervention != InterventionType::none && a.intervention_text.empty()) {
    a.intervention_text = default_intervention_text(a.intervention);
  }
  // Model text that slipped past the lexicon (floor escalation keeps it) is replaced.
  if (!lexicon_violations("intervention_text", a.intervention_text, policy).empty()) {
    a.intervention_text = default_intervention_text(a.intervention);
  }
  if (!lexicon_violations("support_text", a.support_text, policy).empty()) a.support_text.clear();
  return a;
}

EmotionAssessment floor_only_assessment(const EmotionFeatures& f, std::optional<EmotionState> previous,
                                        const PsychologyPolicy& policy) {
  EmotionAssessment a;
  a.state = EmotionState::calm;
  if (previous && tier_of(*previous) == EmotionTier::positive) a.state = *previous;
  if (f.consecutive_failures >= 1 && f.response_latency_seconds > 30.0) a.state = EmotionState::confused;
  a.confidence = 40;
  a.intervention = tier_of(a.state) == EmotionTier::attention ? InterventionType::supportive : InterventionType::none;
  a.degraded = true;
  a.indicators.push_back("assessed from behaviour thresholds only");
  return apply_emotion_floors(std::move(a), f, policy);
}

bool should_reset(const std::vector<AttemptEvent>& history, const PsychologyPolicy& policy) {
  if (history.empty() || !history.back().failed) return false;
  const std::string& sub = history.back().sub_task_id;
  std::size_t start = history.size();
  while (start > 0 && history[start - 1].failed && history[start - 1].sub_task_id == sub) --start;

  std::optional<std::size_t> hint_at;
  if (start > 0 && history[start - 1].sub_task_id == sub && history[start - 1].hint_after == HintLevel::L3) {
    hint_at = start - 1;
  }
  for (std::size_t i = start; i < history.size() && !hint_at; ++i) {
    if (history[i].hint_after == HintLevel::L3) hint_at = i;
  }
  if (!hint_at) return false;
  const auto failures_after = static_cast<int>(history.size() - 1 - *hint_at);
  return failures_after >= policy.reset_after_l3_failures;
}

std::vector<std::string> lexicon_violations(std::string_view field, std::string_view body,
                                            const PsychologyPolicy& policy, bool medical) {
  std::vector<std::string> out;
  detail::scan_lexicon(out, field, body, policy.forbidden_phrases);
  if (medical) detail::scan_lexicon(out, field, body, policy.medical_terms);
  return out;
}

PsychologyMaster::PsychologyMaster(LlmGateway& gateway, PsychologyPolicy policy, ModelConfig config)
    : gateway_(gateway), policy_(std::move(policy)), config_(std::move(config)) {}

Hint PsychologyMaster::generate_hint(HintLevel level, const Json& task_context,
                                     const std::vector<std::string>& action_history,
                                     const PatientProfile& profile) const {
  Json ctx{{"hint_level", level},
           {"sub_task", task_context},
           {"recent_actions", action_history},
           {"profile", {{"name", profile.name}, {"age", profile.age}, {"occupation", profile.occupation}}}};
  auto req = detail::agent_request(prompts::kHintProvider, schema::kHint, std::move(ctx), config_);
  auto check = [&](const Json& doc) {
    return detail::decode_then<Hint>(doc, [&](const Hint& h) {
      std::vector<std::string> v;
      if (h.level != level) {
        v.push_back("hint_level: must be " + std::string(enum_name(level)) + ", got " + std::string(enum_name(h.level)));
      }
      for (auto& s : lexicon_violations("hint_text", h.hint_text, policy_)) v.push_back(std::move(s));
      for (auto& s : lexicon_violations("encouragement", h.encouragement, policy_)) v.push_back(std::move(s));
      if (level == HintLevel::L3) {
        const bool quoted = h.hint_text.find('"') != std::string::npos;
        const bool verb = std::any_of(policy_.action_verbs.begin(), policy_.action_verbs.end(),
                                      [&](const std::string& w) { return text::mentions_ci(h.hint_text, w); });
        if (!quoted && !verb) v.push_back("hint_text: an L3 hint must name the exact action to type next");
      }
      return v;
    });
  };
  try {
    auto resp = gateway_.complete_structured(std::move(req), std::string(schema::kHint), check);
    return decode<Hint>(*resp.parsed_document);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::schema_exhausted || e.code() == ErrorCode::provider_unavailable) {
      throw Error(ErrorCode::hint_failed, e.what());
    }
    throw;
  }
}

EmotionAssessment PsychologyMaster::assess_emotion(const EmotionFeatures& features,
                                                   std::optional<EmotionState> previous,
                                                   const Json& history_window) const {
  Json ctx{{"features", encode_features(features)},
           {"previous_state", previous ? Json(*previous) : Json(nullptr)},
           {"history", history_window}};
  auto req = detail::agent_request(prompts::kEmotionCopilot, schema::kEmotion, std::move(ctx), config_);
  auto check = [&](const Json& doc) {
    return detail::decode_then<EmotionAssessment>(doc, [&](const EmotionAssessment& a) {
      auto v = lexicon_violations("intervention_content", a.intervention_text, policy_);
      for (auto& s : lexicon_violations("emotional_support", a.support_text, policy_)) v.push_back(std::move(s));
      return v;
    });
  };
  try {
    auto resp = gateway_.complete_structured(std::move(req), std::string(schema::kEmotion), check);
    return apply_emotion_floors(decode<EmotionAssessment>(*resp.parsed_document), features, policy_);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::schema_exhausted && e.code() != ErrorCode::provider_unavailable) throw;
    spdlog::warn("[emotion] model assessment unavailable, using floor rules: {}", e.what());
    return floor_only_assessment(features, previous, policy_);
  }
}

}  // namespace letgames
