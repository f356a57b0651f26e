// SPDX-License-Identifier: Apache-2.0
//
// Versioned agent system prompts, compiled in from core/assets/prompts.
#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace letgames::prompts {

inline constexpr std::string_view kGameDesigner = "game_designer.v1";
inline constexpr std::string_view kGameController = "game_controller.v1";
inline constexpr std::string_view kGameCritic = "game_critic.v1";
inline constexpr std::string_view kHintProvider = "hint_provider.v1";
inline constexpr std::string_view kEmotionCopilot = "emotion_copilot.v1";
inline constexpr std::string_view kCognitionTracker = "cognition_tracker.v1";
inline constexpr std::string_view kJudgeDomains = "game_evaluator_domains.v1";
inline constexpr std::string_view kJudgeRubric = "game_evaluator_rubric.v1";
inline constexpr std::string_view kRemeController = "reme_controller.v1";
inline constexpr std::string_view kSimImpaired = "patient_sim_impaired.v1";
inline constexpr std::string_view kSimHealthy = "patient_sim_healthy.v1";

/// Prompt text by name; throws Error(not_found).
std::string_view get(std::string_view name);

std::vector<std::string> names();

/// Replaces each `{key}` placeholder with its value; unknown placeholders stay.
std::string render(std::string_view tpl, const std::map<std::string, std::string>& vars);

}  // namespace letgames::prompts
