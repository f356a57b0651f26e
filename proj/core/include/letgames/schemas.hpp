// SPDX-License-Identifier: Apache-2.0
//
// Output schemas for every agent, registered with the gateway under these ids.
#pragma once

#include <array>
#include <string_view>

#include "letgames/llm.hpp"

namespace letgames::schema {

inline constexpr std::string_view kGameSpec = "game_spec";
inline constexpr std::string_view kTurnOutput = "turn_output";
inline constexpr std::string_view kCritique = "critique_result";
inline constexpr std::string_view kHint = "hint";
inline constexpr std::string_view kEmotion = "emotion_assessment";
inline constexpr std::string_view kCognitionReport = "cognition_report";
inline constexpr std::string_view kRemeAnswer = "reme_answer";
inline constexpr std::string_view kSimAction = "sim_action";
inline constexpr std::string_view kJudgeDomains = "judge_domains";
inline constexpr std::string_view kJudgeRubric = "judge_rubric";

/// Harmful-conduct categories the judge may report.
inline constexpr std::array<std::string_view, 6> kRiskBehaviorCodes{
    "CRITICIZING", "THREATENING", "REPETITIVE", "ARGUING", "SILENT_TREATMENT", "PREMATURE_INTERVENTION"};

bool is_risk_behavior_code(std::string_view code);

std::vector<std::string> validate_game_spec(const Json& doc);
std::vector<std::string> validate_turn_output(const Json& doc);
std::vector<std::string> validate_critique(const Json& doc);
std::vector<std::string> validate_hint(const Json& doc);
std::vector<std::string> validate_emotion(const Json& doc);
std::vector<std::string> validate_cognition_report(const Json& doc);
std::vector<std::string> validate_reme_answer(const Json& doc);
std::vector<std::string> validate_sim_action(const Json& doc);
std::vector<std::string> validate_judge_domains(const Json& doc);
std::vector<std::string> validate_judge_rubric(const Json& doc);

void register_builtin(SchemaRegistry& registry);

}  // namespace letgames::schema
