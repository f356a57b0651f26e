// SPDX-License-Identifier: Apache-2.0
//
// JSON codecs for the domain types. Decoding is tolerant of missing optional
// fields (the schema validators decide what is required) but strict about
// types and enum names. Unknown keys on model-produced documents (GameSpec,
// TurnOutput) are kept in `extra` and written back on encode, so
// decode(encode(x)) == x for every type.
#pragma once

#include <string>

#include "letgames/domain.hpp"

namespace letgames {

#define LETGAMES_DECLARE_CODEC(T)        \
  void to_json(Json& j, const T& value); \
  void from_json(const Json& j, T& value);

LETGAMES_DECLARE_CODEC(CognitiveDomain)
LETGAMES_DECLARE_CODEC(Severity)
LETGAMES_DECLARE_CODEC(ScenarioType)
LETGAMES_DECLARE_CODEC(Phase)
LETGAMES_DECLARE_CODEC(TaskStatus)
LETGAMES_DECLARE_CODEC(ActionType)
LETGAMES_DECLARE_CODEC(EmotionState)
LETGAMES_DECLARE_CODEC(EmotionTrend)
LETGAMES_DECLARE_CODEC(InterventionType)
LETGAMES_DECLARE_CODEC(GameAdjustment)
LETGAMES_DECLARE_CODEC(HintLevel)
LETGAMES_DECLARE_CODEC(CognitiveStrategy)
LETGAMES_DECLARE_CODEC(Method)
LETGAMES_DECLARE_CODEC(Termination)

LETGAMES_DECLARE_CODEC(Impairment)
LETGAMES_DECLARE_CODEC(PatientProfile)
LETGAMES_DECLARE_CODEC(Setting)
LETGAMES_DECLARE_CODEC(NpcSpec)
LETGAMES_DECLARE_CODEC(ItemSpec)
LETGAMES_DECLARE_CODEC(MainTask)
LETGAMES_DECLARE_CODEC(SubTask)
LETGAMES_DECLARE_CODEC(GameSpec)
LETGAMES_DECLARE_CODEC(SuggestedAction)
LETGAMES_DECLARE_CODEC(WorldStateUpdate)
LETGAMES_DECLARE_CODEC(TaskUpdate)
LETGAMES_DECLARE_CODEC(TurnOutput)
LETGAMES_DECLARE_CODEC(SubTaskProgress)
LETGAMES_DECLARE_CODEC(TaskState)
LETGAMES_DECLARE_CODEC(ScenarioState)
LETGAMES_DECLARE_CODEC(UserState)
LETGAMES_DECLARE_CODEC(ConversationEntry)
LETGAMES_DECLARE_CODEC(GameState)
LETGAMES_DECLARE_CODEC(Hint)
LETGAMES_DECLARE_CODEC(EmotionAssessment)
LETGAMES_DECLARE_CODEC(CognitionReport)
LETGAMES_DECLARE_CODEC(RemeDescriptor)
LETGAMES_DECLARE_CODEC(TurnRecord)
LETGAMES_DECLARE_CODEC(SessionRecord)

#undef LETGAMES_DECLARE_CODEC

template <typename T>
Json encode(const T& value) {
  Json j;
  to_json(j, value);
  return j;
}

/// Throws Error(parse_error) naming the offending field on type or enum mismatch.
template <typename T>
T decode(const Json& j) {
  T value{};
  try {
    from_json(j, value);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::parse_error, e.what());
  }
  return value;
}

/// Parses `text` as JSON; throws Error(parse_error) with the parser message.
Json parse_json(std::string_view text);

}  // namespace letgames
