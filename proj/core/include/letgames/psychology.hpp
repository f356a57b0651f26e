// SPDX-License-Identifier: Apache-2.0
//
// Psychology Master: hint gating and generation, emotion assessment with
// deterministic floors, and the reset decision.
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "letgames/domain.hpp"
#include "letgames/llm.hpp"

namespace letgames {

struct PsychologyPolicy {
  double idle_threshold_seconds = 20.0;
  double hint_cooldown_seconds = 15.0;
  int reset_after_l3_failures = 2;
  double fatigue_minutes = 20.0;
  std::vector<std::string> forbidden_phrases{"you forgot", "this is simple", "you made a mistake", "you need to rest"};
  std::vector<std::string> medical_terms{"cognitive impairment", "functional deficit"};
  // Verbs and phrasings that make an L3 hint an executable instruction.
  std::vector<std::string> action_verbs{"go",   "walk", "ask",  "take", "look", "pick",   "open",   "read",
                                        "say",  "tell", "buy",  "check", "find", "talk",  "give",   "choose",
                                        "select", "put", "answer", "visit", "follow", "type", "head"};

  /// Missing keys keep their defaults. Throws Error(parse_error) on type mismatch.
  static PsychologyPolicy from_json(const Json& j);
  /// Throws Error(io_error) when the file cannot be read.
  static PsychologyPolicy load(const std::filesystem::path& path);
  Json to_json() const;
};

struct HintContext {
  double idle_seconds = 0.0;
  int consecutive_failures = 0;
  std::optional<double> seconds_since_last_hint;
  bool just_succeeded = false;
  bool player_actively_exploring = false;
  std::optional<EmotionState> current_emotion;
};

/// nullopt means suppress. Pure and total.
std::optional<HintLevel> hint_gate(const HintContext& ctx, const PsychologyPolicy& policy = {});

/// Inputs to the Emotion Copilot.
struct EmotionFeatures {
  double success_rate = 1.0;         // whole session so far
  double recent_success_rate = 1.0;  // last few judged turns
  int hint_usage_count = 0;
  double response_latency_seconds = 0.0;
  double game_duration_minutes = 0.0;
  double minutes_since_break = 0.0;
  int consecutive_failures = 0;
  int undo_count = 0;  // explicit self-corrections

  /// Recent performance below the session average.
  bool success_declining() const { return recent_success_rate + 1e-9 < success_rate; }
};

Json encode_features(const EmotionFeatures& f);

/// Escalates the assessment so that three failures in a row reach the
/// intervention tier and a long session with falling results reads as fatigue
/// (unless already anxious), then aligns the intervention with the state.
/// Never lowers the tier.
EmotionAssessment apply_emotion_floors(EmotionAssessment a, const EmotionFeatures& f,
                                       const PsychologyPolicy& policy = {});

/// Deterministic assessment used when the model gives no valid answer.
EmotionAssessment floor_only_assessment(const EmotionFeatures& f, std::optional<EmotionState> previous,
                                        const PsychologyPolicy& policy = {});

/// One judged turn as seen by the reset rule.
struct AttemptEvent {
  std::string sub_task_id;
  bool failed = false;
  std::optional<HintLevel> hint_after;  // hint shown after this turn
};

/// True once the player has failed the same sub-task K times in a row after an L3 hint on it.
bool should_reset(const std::vector<AttemptEvent>& history, const PsychologyPolicy& policy = {});

/// Violations of the dignity lexicon (and, when `medical` is set, clinical terms) in `text`.
std::vector<std::string> lexicon_violations(std::string_view field, std::string_view text,
                                            const PsychologyPolicy& policy, bool medical = false);

class PsychologyMaster {
 public:
  explicit PsychologyMaster(LlmGateway& gateway, PsychologyPolicy policy = {},
                            ModelConfig config = ModelConfig::game_agent());

  /// Hint at exactly `level`, free of forbidden phrases; L3 hints name an
  /// executable action. Throws HINT_FAILED.
  Hint generate_hint(HintLevel level, const Json& task_context, const std::vector<std::string>& action_history,
                     const PatientProfile& profile) const;

  /// Model assessment followed by the floors. Falls back to the floors alone
  /// (flagged degraded) when the model gives no valid answer.
  EmotionAssessment assess_emotion(const EmotionFeatures& features, std::optional<EmotionState> previous,
                                   const Json& history_window) const;

  const PsychologyPolicy& policy() const { return policy_; }

 private:
  LlmGateway& gateway_;
  PsychologyPolicy policy_;
  ModelConfig config_;
};

}  // namespace letgames
