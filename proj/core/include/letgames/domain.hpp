// SPDX-License-Identifier: Apache-2.0
//
// Shared domain types. These are plain values: copyable, comparable, and safe
// to share across threads. JSON field names follow the agent output schemas
// (snake_case), see codec.hpp.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "letgames/enum_names.hpp"

namespace letgames {

using Json = nlohmann::json;

// ============================================================================
// Enumerations
// ============================================================================

enum class CognitiveDomain {
  memory,
  attention,
  verbal_learning,
  executive_function,
  social_cognition,
  language,
};

enum class Severity { mild, moderate, severe };
enum class AgeGroup { senior, non_senior };
enum class ScenarioType { daily_life, family, leisure, social, challenge, seasonal };
enum class Phase { encoding, retention, retrieval, none };
enum class TaskStatus { pending, in_progress, completed, failed };
enum class ActionType { primary, exploratory, help };

enum class EmotionState {
  calm,
  engaged,
  excited,
  mild_anxiety,
  confused,
  frustrated,
  fatigued,
  anxious,
};
enum class EmotionTier { positive, attention, intervention };
enum class EmotionTrend { improving, stable, declining };
enum class InterventionType { none, preventive, supportive, moderate, intensive, rest_suggestion };
enum class GameAdjustment { reduce_difficulty, provide_hint, switch_scenario, suggest_break, no_change };

enum class HintLevel { L1 = 1, L2 = 2, L3 = 3 };
enum class CognitiveStrategy {
  categorization,
  association,
  elimination,
  visual_cue,
  logical_reasoning,
  memory_replay,
  direct_guidance,
};

enum class Method { letgames, reme };
enum class Termination { success, failure, reset, abandoned };

template <>
struct EnumNames<CognitiveDomain> {
  static constexpr std::array<std::pair<CognitiveDomain, std::string_view>, 6> values{{
      {CognitiveDomain::memory, "memory"},
      {CognitiveDomain::attention, "attention"},
      {CognitiveDomain::verbal_learning, "verbal_learning"},
      {CognitiveDomain::executive_function, "executive_function"},
      {CognitiveDomain::social_cognition, "social_cognition"},
      {CognitiveDomain::language, "language"},
  }};
};
template <>
struct EnumNames<Severity> {
  static constexpr std::array<std::pair<Severity, std::string_view>, 3> values{
      {{Severity::mild, "mild"}, {Severity::moderate, "moderate"}, {Severity::severe, "severe"}}};
};
template <>
struct EnumNames<AgeGroup> {
  static constexpr std::array<std::pair<AgeGroup, std::string_view>, 2> values{
      {{AgeGroup::senior, "senior"}, {AgeGroup::non_senior, "non_senior"}}};
};
template <>
struct EnumNames<ScenarioType> {
  static constexpr std::array<std::pair<ScenarioType, std::string_view>, 6> values{{
      {ScenarioType::daily_life, "daily_life"},
      {ScenarioType::family, "family"},
      {ScenarioType::leisure, "leisure"},
      {ScenarioType::social, "social"},
      {ScenarioType::challenge, "challenge"},
      {ScenarioType::seasonal, "seasonal"},
  }};
};
template <>
struct EnumNames<Phase> {
  static constexpr std::array<std::pair<Phase, std::string_view>, 4> values{{
      {Phase::encoding, "encoding"},
      {Phase::retention, "retention"},
      {Phase::retrieval, "retrieval"},
      {Phase::none, "none"},
  }};
};
template <>
struct EnumNames<TaskStatus> {
  static constexpr std::array<std::pair<TaskStatus, std::string_view>, 4> values{{
      {TaskStatus::pending, "pending"},
      {TaskStatus::in_progress, "in_progress"},
      {TaskStatus::completed, "completed"},
      {TaskStatus::failed, "failed"},
  }};
};
template <>
struct EnumNames<ActionType> {
  static constexpr std::array<std::pair<ActionType, std::string_view>, 3> values{
      {{ActionType::primary, "primary"}, {ActionType::exploratory, "exploratory"}, {ActionType::help, "help"}}};
};
template <>
struct EnumNames<EmotionState> {
  static constexpr std::array<std::pair<EmotionState, std::string_view>, 8> values{{
      {EmotionState::calm, "calm"},
      {EmotionState::engaged, "engaged"},
      {EmotionState::excited, "excited"},
      {EmotionState::mild_anxiety, "mild_anxiety"},
      {EmotionState::confused, "confused"},
      {EmotionState::frustrated, "frustrated"},
      {EmotionState::fatigued, "fatigued"},
      {EmotionState::anxious, "anxious"},
  }};
};
template <>
struct EnumNames<EmotionTrend> {
  static constexpr std::array<std::pair<EmotionTrend, std::string_view>, 3> values{
      {{EmotionTrend::improving, "improving"}, {EmotionTrend::stable, "stable"}, {EmotionTrend::declining, "declining"}}};
};
template <>
struct EnumNames<InterventionType> {
  static constexpr std::array<std::pair<InterventionType, std::string_view>, 6> values{{
      {InterventionType::none, "none"},
      {InterventionType::preventive, "preventive"},
      {InterventionType::supportive, "supportive"},
      {InterventionType::moderate, "moderate"},
      {InterventionType::intensive, "intensive"},
      {InterventionType::rest_suggestion, "rest_suggestion"},
  }};
};
template <>
struct EnumNames<GameAdjustment> {
  static constexpr std::array<std::pair<GameAdjustment, std::string_view>, 5> values{{
      {GameAdjustment::reduce_difficulty, "reduce_difficulty"},
      {GameAdjustment::provide_hint, "provide_hint"},
      {GameAdjustment::switch_scenario, "switch_scenario"},
      {GameAdjustment::suggest_break, "suggest_break"},
      {GameAdjustment::no_change, "no_change"},
  }};
};
template <>
struct EnumNames<HintLevel> {
  static constexpr std::array<std::pair<HintLevel, std::string_view>, 3> values{
      {{HintLevel::L1, "L1"}, {HintLevel::L2, "L2"}, {HintLevel::L3, "L3"}}};
};
template <>
struct EnumNames<CognitiveStrategy> {
  static constexpr std::array<std::pair<CognitiveStrategy, std::string_view>, 7> values{{
      {CognitiveStrategy::categorization, "categorization"},
      {CognitiveStrategy::association, "association"},
      {CognitiveStrategy::elimination, "elimination"},
      {CognitiveStrategy::visual_cue, "visual_cue"},
      {CognitiveStrategy::logical_reasoning, "logical_reasoning"},
      {CognitiveStrategy::memory_replay, "memory_replay"},
      {CognitiveStrategy::direct_guidance, "direct_guidance"},
  }};
};
template <>
struct EnumNames<Method> {
  static constexpr std::array<std::pair<Method, std::string_view>, 2> values{
      {{Method::letgames, "letgames"}, {Method::reme, "reme"}}};
};
template <>
struct EnumNames<Termination> {
  static constexpr std::array<std::pair<Termination, std::string_view>, 4> values{{
      {Termination::success, "success"},
      {Termination::failure, "failure"},
      {Termination::reset, "reset"},
      {Termination::abandoned, "abandoned"},
  }};
};

enum class Band { simplify, balanced, challenge };
template <>
struct EnumNames<Band> {
  static constexpr std::array<std::pair<Band, std::string_view>, 3> values{
      {{Band::simplify, "simplify"}, {Band::balanced, "balanced"}, {Band::challenge, "challenge"}}};
};

struct IntRange {
  int lo = 0;
  int hi = 0;

  bool contains(int v) const { return v >= lo && v <= hi; }
  bool operator==(const IntRange&) const = default;
};

/// Designer calibration bucket chosen from the player's failure rate.
struct DifficultyBand {
  Band band = Band::balanced;
  IntRange memory_items;
  IntRange npc_count;
  IntRange retention_rounds;

  bool operator==(const DifficultyBand&) const = default;
};

/// All six domains in declaration order.
const std::vector<CognitiveDomain>& all_domains();

/// Default active set: the five domains reported in the results tables (no `language`).
const std::vector<CognitiveDomain>& default_active_domains();

/// Throws Error(invalid_argument) for unknown names.
CognitiveDomain parse_domain(std::string_view name);

EmotionTier tier_of(EmotionState state);

/// Phases that use the encoding/retention/retrieval chain.
bool requires_three_phases(CognitiveDomain domain);

// ============================================================================
// Patient profile
// ============================================================================

struct Impairment {
  CognitiveDomain domain = CognitiveDomain::memory;
  Severity severity = Severity::moderate;
  std::string description;
  std::string daily_impact;

  bool operator==(const Impairment&) const = default;
};

struct PatientProfile {
  std::string id;
  std::string name;
  int age = 0;
  std::string gender;
  std::string occupation;
  std::string life_experience;
  std::optional<Impairment> impairment;  // nullopt = healthy
  bool depression_comorbid = false;

  bool healthy() const { return !impairment.has_value(); }
  AgeGroup age_group() const { return age >= 50 ? AgeGroup::senior : AgeGroup::non_senior; }

  bool operator==(const PatientProfile&) const = default;
};

/// Empty when the profile satisfies its invariants.
std::vector<std::string> profile_violations(const PatientProfile& profile);

// ============================================================================
// Game specification (designer output)
// ============================================================================

struct Setting {
  std::string location;
  std::string time_of_day;
  std::string weather;
  std::string season;
  std::string atmosphere;

  bool operator==(const Setting&) const = default;
};

struct NpcSpec {
  std::string name;
  std::string age;
  std::string relationship;
  std::vector<std::string> personality;
  std::string appearance;
  std::string speech_style;
  std::string background_story;
  std::vector<std::string> potential_dialogues;

  bool operator==(const NpcSpec&) const = default;
};

struct ItemSpec {
  std::string item_name;
  std::string description;
  std::string significance;
  std::string cognitive_relevance;

  bool operator==(const ItemSpec&) const = default;
};

struct MainTask {
  std::string description;
  std::string goal;
  std::string motivation;

  bool operator==(const MainTask&) const = default;
};

struct SubTask {
  std::string task_id;
  std::string description;
  CognitiveDomain cognitive_function = CognitiveDomain::memory;
  int difficulty = 1;
  std::vector<std::string> steps;
  Phase phase = Phase::none;
  std::optional<std::string> npc_trigger;
  std::optional<std::string> npc_dialogue;
  std::optional<std::string> expected_recall;
  TaskStatus status = TaskStatus::pending;
  int progress = 0;

  bool operator==(const SubTask&) const = default;
};

struct GameSpec {
  std::string scenario_name;
  ScenarioType scenario_type = ScenarioType::daily_life;
  Setting setting;
  std::string story_background;
  std::vector<NpcSpec> npcs;
  std::vector<ItemSpec> items;
  MainTask main_task;
  std::vector<SubTask> sub_tasks;
  std::string success_criteria;
  int difficulty_level = 3;
  Json extra = Json::object();  // unknown fields from the model, preserved verbatim

  bool operator==(const GameSpec&) const = default;
};

// ============================================================================
// Controller turn output
// ============================================================================

struct SuggestedAction {
  std::string action;
  std::string action_id;
  ActionType type = ActionType::primary;

  bool operator==(const SuggestedAction&) const = default;
};

/// Merge patch: absent fields leave the state unchanged, present lists replace.
struct WorldStateUpdate {
  std::optional<std::string> current_scene;
  std::optional<std::string> player_location;
  std::optional<std::string> scene_description;
  std::optional<std::string> situational_context;
  std::optional<std::vector<std::string>> npcs_present;
  std::optional<std::vector<std::string>> items_present;
  std::optional<std::vector<std::string>> player_inventory;

  bool operator==(const WorldStateUpdate&) const = default;
};

struct TaskUpdate {
  std::string task_id;
  TaskStatus status = TaskStatus::in_progress;
  int progress = 0;

  bool operator==(const TaskUpdate&) const = default;
};

struct TurnOutput {
  std::string narrative;
  std::string current_situation;
  std::string current_goal;
  std::vector<SuggestedAction> suggested_actions;
  std::optional<std::string> npc_dialogue;
  bool is_action_successful = true;
  std::optional<std::string> success_encouragement;
  std::optional<std::string> gentle_guidance;
  bool is_question_moment = false;
  WorldStateUpdate world_state_update;
  std::optional<TaskUpdate> task_update;
  Json extra = Json::object();

  bool operator==(const TurnOutput&) const = default;
};

// ============================================================================
// Runtime game state: (task, scenario, user, conversation)
// ============================================================================

struct SubTaskProgress {
  std::string task_id;
  Phase phase = Phase::none;
  TaskStatus status = TaskStatus::pending;
  int progress = 0;

  bool operator==(const SubTaskProgress&) const = default;
};

struct TaskState {
  std::string active_sub_task_id;
  std::string progress_description;
  std::vector<SubTaskProgress> sub_tasks;  // spec order

  bool operator==(const TaskState&) const = default;
};

struct ScenarioState {
  std::string current_scene;
  std::vector<std::string> npcs_present;
  std::vector<std::string> items_present;
  std::string scene_description;

  bool operator==(const ScenarioState&) const = default;
};

struct UserState {
  std::string location;
  std::vector<std::string> inventory;
  std::string situational_context;

  bool operator==(const UserState&) const = default;
};

struct ConversationEntry {
  std::string action;
  TurnOutput output;

  bool operator==(const ConversationEntry&) const = default;
};

struct GameState {
  TaskState task;
  ScenarioState scenario;
  UserState user;
  std::vector<ConversationEntry> conversation;
  Phase phase = Phase::none;
  int turn_index = 0;
  // Entity names declared by the game spec; the scenario/user lists must stay inside them.
  std::vector<std::string> declared_npcs;
  std::vector<std::string> declared_items;

  bool operator==(const GameState&) const = default;
};

// ============================================================================
// Psychology-track outputs
// ============================================================================

struct Hint {
  HintLevel level = HintLevel::L1;
  std::string hint_text;
  std::string encouragement;
  CognitiveStrategy cognitive_strategy = CognitiveStrategy::logical_reasoning;
  double wait_before_next = 20.0;

  bool operator==(const Hint&) const = default;
};

struct EmotionAssessment {
  EmotionState state = EmotionState::calm;
  int confidence = 50;
  std::vector<std::string> indicators;
  EmotionTrend trend = EmotionTrend::stable;
  InterventionType intervention = InterventionType::none;
  std::string intervention_text;
  std::string support_text;
  GameAdjustment suggested_action = GameAdjustment::no_change;
  bool degraded = false;  // produced by floor rules alone after the model failed

  bool operator==(const EmotionAssessment&) const = default;
};

// ============================================================================
// Cognition tracker report
// ============================================================================

struct CognitionReport {
  std::string session_id;
  std::string profile_id;
  CognitiveDomain target_domain = CognitiveDomain::memory;
  std::map<CognitiveDomain, int> scores;
  std::map<CognitiveDomain, std::string> friendly_feedback;
  std::vector<std::string> strengths;
  std::vector<std::string> areas_for_improvement;
  std::vector<std::string> recommendations;
  std::string encouragement;
  std::string progress_analysis;
  int difficulty_played = 3;
  int next_difficulty = 3;
  double failure_rate = 0.0;

  bool operator==(const CognitionReport&) const = default;
};

// ============================================================================
// Session archive
// ============================================================================

struct RemeDescriptor {
  std::string category;
  std::string target;

  bool operator==(const RemeDescriptor&) const = default;
};

struct TurnRecord {
  std::string player_action;
  TurnOutput turn_output;
  std::optional<Hint> hint;
  std::optional<EmotionAssessment> emotion;
  double wall_clock_latency = 0.0;  // seconds
  int refine_attempts = 1;
  bool approved = true;
  bool reset = false;

  bool operator==(const TurnRecord&) const = default;
};

struct SessionRecord {
  std::string session_id;
  std::string profile_id;
  PatientProfile profile;  // snapshot; stripped before blind judging
  CognitiveDomain target_domain = CognitiveDomain::memory;
  Method method = Method::letgames;
  std::optional<GameSpec> spec;
  std::optional<RemeDescriptor> reme;
  std::vector<GameSpec> superseded_specs;  // games replaced by a reset
  std::optional<TurnOutput> opening;
  std::vector<TurnRecord> turns;
  std::optional<CognitionReport> tracker_report;
  std::optional<Termination> terminated;
  std::string started_at;  // ISO-8601 UTC
  std::string ended_at;
  int resets = 0;

  bool operator==(const SessionRecord&) const = default;
};

/// Empty when the record satisfies its invariants.
std::vector<std::string> record_violations(const SessionRecord& record);

/// ISO-8601 UTC with millisecond precision ("2026-10-15T08:00:00.000Z").
std::string utc_timestamp_now();

}  // namespace letgames
