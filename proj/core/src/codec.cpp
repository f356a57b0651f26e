// SPDX-License-Identifier: Apache-2.0
#include "letgames/codec.hpp"

#include <initializer_list>

namespace letgames {
namespace {

[[noreturn]] void field_error(std::string_view key, std::string_view why) {
  throw Error(ErrorCode::parse_error, "field '" + std::string(key) + "': " + std::string(why));
}

const Json* find(const Json& j, std::string_view key) {
  if (!j.is_object()) return nullptr;
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return nullptr;
  return &*it;
}

void require_object(const Json& j, std::string_view what) {
  if (!j.is_object()) throw Error(ErrorCode::parse_error, std::string(what) + " must be a JSON object");
}

template <typename T>
void get(const Json& j, std::string_view key, T& out) {
  const Json* v = find(j, key);
  if (v == nullptr) return;
  try {
    out = v->get<T>();
  } catch (const Json::exception& e) {
    field_error(key, e.what());
  } catch (const Error& e) {
    field_error(key, e.what());
  }
}

template <typename T>
void get(const Json& j, std::string_view key, std::optional<T>& out) {
  const Json* v = find(j, key);
  if (v == nullptr) {
    out.reset();
    return;
  }
  T value{};
  get(j, key, value);
  out = std::move(value);
}

// Free-text fields sometimes arrive as numbers ("age": 65); keep them as text.
void get_text(const Json& j, std::string_view key, std::string& out) {
  const Json* v = find(j, key);
  if (v == nullptr) return;
  if (v->is_string()) {
    out = v->get<std::string>();
  } else if (v->is_number() || v->is_boolean()) {
    out = v->dump();
  } else {
    field_error(key, "expected text");
  }
}

void get_int(const Json& j, std::string_view key, int& out) {
  const Json* v = find(j, key);
  if (v == nullptr) return;
  if (v->is_number()) {
    out = static_cast<int>(v->get<double>());
  } else if (v->is_string()) {
    // "3" is common model output for integer fields.
    try {
      std::size_t used = 0;
      out = std::stoi(v->get<std::string>(), &used);
    } catch (const std::exception&) {
      field_error(key, "expected integer");
    }
  } else {
    field_error(key, "expected integer");
  }
}

void get_double(const Json& j, std::string_view key, double& out) {
  const Json* v = find(j, key);
  if (v == nullptr) return;
  if (!v->is_number()) field_error(key, "expected number");
  out = v->get<double>();
}

void get_bool(const Json& j, std::string_view key, bool& out) {
  const Json* v = find(j, key);
  if (v == nullptr) return;
  if (v->is_boolean()) {
    out = v->get<bool>();
  } else if (v->is_string() && (*v == "true" || *v == "false")) {
    out = *v == "true";
  } else {
    field_error(key, "expected boolean");
  }
}

void get_text_list(const Json& j, std::string_view key, std::vector<std::string>& out) {
  const Json* v = find(j, key);
  if (v == nullptr) return;
  if (v->is_string()) {  // a single string where a list was expected
    out = {v->get<std::string>()};
    return;
  }
  if (!v->is_array()) field_error(key, "expected list of text");
  out.clear();
  for (const auto& e : *v) {
    if (e.is_string()) {
      out.push_back(e.get<std::string>());
    } else if (e.is_number()) {
      out.push_back(e.dump());
    } else {
      field_error(key, "expected list of text");
    }
  }
}

Json collect_extra(const Json& j, std::initializer_list<std::string_view> known) {
  Json extra = Json::object();
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool is_known = false;
    for (auto k : known) {
      if (it.key() == k) {
        is_known = true;
        break;
      }
    }
    if (!is_known) extra[it.key()] = it.value();
  }
  return extra;
}

void merge_extra(Json& j, const Json& extra) {
  if (!extra.is_object()) return;
  for (auto it = extra.begin(); it != extra.end(); ++it) {
    if (!j.contains(it.key())) j[it.key()] = it.value();
  }
}

template <typename T>
Json opt(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::parse_error, e.what());
  }
}

// ---------------------------------------------------------------------------
// Enums

#define LETGAMES_ENUM_CODEC(T, WHAT)                                              \
  void to_json(Json& j, const T& value) { j = std::string(enum_name(value)); }   \
  void from_json(const Json& j, T& value) {                                      \
    if (!j.is_string()) throw Error(ErrorCode::parse_error, WHAT " must be a string"); \
    value = enum_require<T>(j.get<std::string>(), WHAT);                          \
  }

LETGAMES_ENUM_CODEC(Severity, "severity")
LETGAMES_ENUM_CODEC(ScenarioType, "scenario_type")
LETGAMES_ENUM_CODEC(Phase, "phase")
LETGAMES_ENUM_CODEC(TaskStatus, "status")
LETGAMES_ENUM_CODEC(ActionType, "action type")
LETGAMES_ENUM_CODEC(EmotionState, "emotion state")
LETGAMES_ENUM_CODEC(EmotionTrend, "trend")
LETGAMES_ENUM_CODEC(InterventionType, "intervention")
LETGAMES_ENUM_CODEC(GameAdjustment, "suggested_action")
LETGAMES_ENUM_CODEC(HintLevel, "hint level")
LETGAMES_ENUM_CODEC(Method, "method")
LETGAMES_ENUM_CODEC(Termination, "termination")

#undef LETGAMES_ENUM_CODEC

void to_json(Json& j, const CognitiveDomain& value) { j = std::string(enum_name(value)); }
void from_json(const Json& j, CognitiveDomain& value) {
  if (!j.is_string()) throw Error(ErrorCode::parse_error, "cognitive domain must be a string");
  try {
    value = parse_domain(j.get<std::string>());
  } catch (const Error& e) {
    throw Error(ErrorCode::parse_error, e.what());
  }
}

void to_json(Json& j, const CognitiveStrategy& value) { j = std::string(enum_name(value)); }
void from_json(const Json& j, CognitiveStrategy& value) {
  if (!j.is_string()) throw Error(ErrorCode::parse_error, "cognitive_strategy must be a string");
  const auto name = j.get<std::string>();
  // The hint prompt's own example spells it out.
  value = name == "elimination_method" ? CognitiveStrategy::elimination
                                       : enum_require<CognitiveStrategy>(name, "cognitive_strategy");
}

// ---------------------------------------------------------------------------
// Profile

void to_json(Json& j, const Impairment& v) {
  j = Json{{"kind", "impaired"},
           {"domain", v.domain},
           {"severity", v.severity},
           {"description", v.description},
           {"daily_impact", v.daily_impact}};
}
void from_json(const Json& j, Impairment& v) {
  require_object(j, "condition");
  get(j, "domain", v.domain);
  get(j, "severity", v.severity);
  get_text(j, "description", v.description);
  get_text(j, "daily_impact", v.daily_impact);
}

void to_json(Json& j, const PatientProfile& v) {
  j = Json{{"id", v.id},
           {"name", v.name},
           {"age", v.age},
           {"gender", v.gender},
           {"occupation", v.occupation},
           {"life_experience", v.life_experience},
           {"condition", v.impairment ? Json(*v.impairment) : Json{{"kind", "healthy"}}},
           {"depression_comorbid", v.depression_comorbid}};
}
void from_json(const Json& j, PatientProfile& v) {
  require_object(j, "profile");
  get_text(j, "id", v.id);
  get_text(j, "name", v.name);
  get_int(j, "age", v.age);
  get_text(j, "gender", v.gender);
  get_text(j, "occupation", v.occupation);
  get_text(j, "life_experience", v.life_experience);
  v.impairment.reset();
  if (const Json* c = find(j, "condition")) {
    require_object(*c, "condition");
    const std::string kind = c->value("kind", "healthy");
    if (kind == "impaired") {
      v.impairment = c->get<Impairment>();
    } else if (kind != "healthy") {
      field_error("condition.kind", "expected healthy|impaired");
    }
  }
  get_bool(j, "depression_comorbid", v.depression_comorbid);
}

// ---------------------------------------------------------------------------
// Game specification

void to_json(Json& j, const Setting& v) {
  j = Json{{"location", v.location},
           {"time_of_day", v.time_of_day},
           {"weather", v.weather},
           {"season", v.season},
           {"atmosphere", v.atmosphere}};
}
void from_json(const Json& j, Setting& v) {
  require_object(j, "setting");
  get_text(j, "location", v.location);
  get_text(j, "time", v.time_of_day);
  get_text(j, "time_of_day", v.time_of_day);
  get_text(j, "weather", v.weather);
  get_text(j, "season", v.season);
  get_text(j, "atmosphere", v.atmosphere);
}

void to_json(Json& j, const NpcSpec& v) {
  j = Json{{"name", v.name},
           {"age", v.age},
           {"relationship", v.relationship},
           {"personality", v.personality},
           {"appearance", v.appearance},
           {"speech_style", v.speech_style},
           {"background_story", v.background_story},
           {"potential_dialogues", v.potential_dialogues}};
}
void from_json(const Json& j, NpcSpec& v) {
  require_object(j, "npc");
  get_text(j, "name", v.name);
  get_text(j, "age", v.age);
  get_text(j, "role", v.relationship);
  get_text(j, "relationship", v.relationship);
  get_text_list(j, "personality", v.personality);
  get_text(j, "appearance", v.appearance);
  get_text(j, "speech_style", v.speech_style);
  get_text(j, "background_story", v.background_story);
  get_text_list(j, "potential_dialogues", v.potential_dialogues);
}

void to_json(Json& j, const ItemSpec& v) {
  j = Json{{"item_name", v.item_name},
           {"description", v.description},
           {"significance", v.significance},
           {"cognitive_relevance", v.cognitive_relevance}};
}
void from_json(const Json& j, ItemSpec& v) {
  require_object(j, "item");
  get_text(j, "item_name", v.item_name);
  get_text(j, "description", v.description);
  get_text(j, "significance", v.significance);
  get_text(j, "cognitive_relevance", v.cognitive_relevance);
}

void to_json(Json& j, const MainTask& v) {
  j = Json{{"description", v.description}, {"goal", v.goal}, {"motivation", v.motivation}};
}
void from_json(const Json& j, MainTask& v) {
  if (j.is_string()) {  // the designer prompt allows a one-line objective
    v.description = j.get<std::string>();
    return;
  }
  require_object(j, "main_task");
  get_text(j, "description", v.description);
  get_text(j, "goal", v.goal);
  get_text(j, "motivation", v.motivation);
}

void to_json(Json& j, const SubTask& v) {
  j = Json{{"task_id", v.task_id},
           {"description", v.description},
           {"cognitive_function", v.cognitive_function},
           {"difficulty", v.difficulty},
           {"steps", v.steps},
           {"phase", v.phase},
           {"npc_trigger", opt(v.npc_trigger)},
           {"npc_dialogue", opt(v.npc_dialogue)},
           {"expected_recall", opt(v.expected_recall)},
           {"status", v.status},
           {"progress", v.progress}};
}
void from_json(const Json& j, SubTask& v) {
  require_object(j, "sub_task");
  get_text(j, "task_id", v.task_id);
  get_text(j, "description", v.description);
  get(j, "cognitive_function", v.cognitive_function);
  get_int(j, "difficulty", v.difficulty);
  get_text_list(j, "steps", v.steps);
  get(j, "phase", v.phase);
  get(j, "npc_trigger", v.npc_trigger);
  get(j, "npc_dialogue", v.npc_dialogue);
  v.expected_recall.reset();
  if (const Json* r = find(j, "expected_recall")) {
    // Models frequently emit the recall key as a list of items.
    if (r->is_array()) {
      std::vector<std::string> parts;
      get_text_list(j, "expected_recall", parts);
      std::string joined;
      for (const auto& p : parts) joined += (joined.empty() ? "" : ", ") + p;
      v.expected_recall = joined;
    } else {
      std::string text;
      get_text(j, "expected_recall", text);
      v.expected_recall = text;
    }
  }
  get(j, "status", v.status);
  get_int(j, "progress", v.progress);
}

void to_json(Json& j, const GameSpec& v) {
  j = Json{{"scenario_name", v.scenario_name},
           {"scenario_type", v.scenario_type},
           {"setting", v.setting},
           {"story_background", v.story_background},
           {"npcs", v.npcs},
           {"items", v.items},
           {"main_task", v.main_task},
           {"sub_tasks", v.sub_tasks},
           {"success_criteria", v.success_criteria},
           {"difficulty_level", v.difficulty_level}};
  merge_extra(j, v.extra);
}
void from_json(const Json& j, GameSpec& v) {
  require_object(j, "game spec");
  get_text(j, "scenario_name", v.scenario_name);
  get(j, "scenario_type", v.scenario_type);
  get(j, "opening_setting", v.setting);
  get(j, "setting", v.setting);
  get_text(j, "story_outline", v.story_background);
  get_text(j, "story_background", v.story_background);
  get(j, "npcs", v.npcs);
  get(j, "items", v.items);
  get(j, "main_task", v.main_task);
  get(j, "sub_tasks", v.sub_tasks);
  get_text(j, "success_criteria", v.success_criteria);
  get_int(j, "difficulty_level", v.difficulty_level);
  v.extra = collect_extra(j, {"scenario_name", "scenario_type", "setting", "opening_setting", "story_background",
                              "story_outline", "npcs", "items", "main_task", "sub_tasks", "success_criteria",
                              "difficulty_level"});
}

// ---------------------------------------------------------------------------
// Turn output

void to_json(Json& j, const SuggestedAction& v) {
  j = Json{{"action", v.action}, {"action_id", v.action_id}, {"type", v.type}};
}
void from_json(const Json& j, SuggestedAction& v) {
  if (j.is_string()) {  // bare action text
    v.action = j.get<std::string>();
    return;
  }
  require_object(j, "suggested action");
  get_text(j, "action", v.action);
  get_text(j, "action_id", v.action_id);
  get(j, "type", v.type);
}

void to_json(Json& j, const WorldStateUpdate& v) {
  j = Json::object();
  if (v.current_scene) j["current_scene"] = *v.current_scene;
  if (v.player_location) j["player_location"] = *v.player_location;
  if (v.scene_description) j["scene_description"] = *v.scene_description;
  if (v.situational_context) j["situational_context"] = *v.situational_context;
  if (v.npcs_present) j["npcs_present"] = *v.npcs_present;
  if (v.items_present) j["items_present"] = *v.items_present;
  if (v.player_inventory) j["player_inventory"] = *v.player_inventory;
}
void from_json(const Json& j, WorldStateUpdate& v) {
  require_object(j, "world_state_update");
  auto text = [&](std::string_view key, std::optional<std::string>& out) {
    out.reset();
    if (find(j, key) == nullptr) return;
    std::string s;
    get_text(j, key, s);
    out = s;
  };
  auto list = [&](std::string_view key, std::optional<std::vector<std::string>>& out) {
    out.reset();
    if (find(j, key) == nullptr) return;
    std::vector<std::string> l;
    get_text_list(j, key, l);
    out = l;
  };
  text("current_scene", v.current_scene);
  text("player_location", v.player_location);
  text("scene_description", v.scene_description);
  text("situational_context", v.situational_context);
  list("npcs_present", v.npcs_present);
  list("items_present", v.items_present);
  list("player_inventory", v.player_inventory);
}

void to_json(Json& j, const TaskUpdate& v) {
  j = Json{{"task_id", v.task_id}, {"status", v.status}, {"progress", v.progress}};
}
void from_json(const Json& j, TaskUpdate& v) {
  require_object(j, "task_update");
  get_text(j, "task_id", v.task_id);
  get(j, "status", v.status);
  get_int(j, "progress", v.progress);
}

void to_json(Json& j, const TurnOutput& v) {
  j = Json{{"narrative", v.narrative},
           {"current_situation", v.current_situation},
           {"current_goal", v.current_goal},
           {"suggested_actions", v.suggested_actions},
           {"npc_dialogue", opt(v.npc_dialogue)},
           {"is_action_successful", v.is_action_successful},
           {"success_encouragement", opt(v.success_encouragement)},
           {"gentle_guidance", opt(v.gentle_guidance)},
           {"is_question_moment", v.is_question_moment},
           {"world_state_update", v.world_state_update},
           {"task_update", v.task_update ? Json(*v.task_update) : Json(nullptr)}};
  merge_extra(j, v.extra);
}
void from_json(const Json& j, TurnOutput& v) {
  require_object(j, "turn output");
  get_text(j, "narrative", v.narrative);
  get_text(j, "current_situation", v.current_situation);
  get_text(j, "current_goal", v.current_goal);
  get(j, "suggested_actions", v.suggested_actions);
  get(j, "npc_dialogue", v.npc_dialogue);
  get_bool(j, "is_action_successful", v.is_action_successful);
  get(j, "success_encouragement", v.success_encouragement);
  get(j, "gentle_guidance", v.gentle_guidance);
  get_bool(j, "is_question_moment", v.is_question_moment);
  get(j, "world_state_update", v.world_state_update);
  v.task_update.reset();
  if (const Json* t = find(j, "task_update")) {
    // An empty object means "no update".
    if (!(t->is_object() && t->empty())) get(j, "task_update", v.task_update);
  }
  v.extra = collect_extra(j, {"narrative", "current_situation", "current_goal", "suggested_actions", "npc_dialogue",
                              "is_action_successful", "success_encouragement", "gentle_guidance",
                              "is_question_moment", "world_state_update", "task_update"});
}

// ---------------------------------------------------------------------------
// Game state

void to_json(Json& j, const SubTaskProgress& v) {
  j = Json{{"task_id", v.task_id}, {"phase", v.phase}, {"status", v.status}, {"progress", v.progress}};
}
void from_json(const Json& j, SubTaskProgress& v) {
  require_object(j, "sub-task progress");
  get_text(j, "task_id", v.task_id);
  get(j, "phase", v.phase);
  get(j, "status", v.status);
  get_int(j, "progress", v.progress);
}

void to_json(Json& j, const TaskState& v) {
  j = Json{{"active_sub_task_id", v.active_sub_task_id},
           {"progress_description", v.progress_description},
           {"sub_tasks", v.sub_tasks}};
}
void from_json(const Json& j, TaskState& v) {
  require_object(j, "task state");
  get_text(j, "active_sub_task_id", v.active_sub_task_id);
  get_text(j, "progress_description", v.progress_description);
  get(j, "sub_tasks", v.sub_tasks);
}

void to_json(Json& j, const ScenarioState& v) {
  j = Json{{"current_scene", v.current_scene},
           {"npcs_present", v.npcs_present},
           {"items_present", v.items_present},
           {"scene_description", v.scene_description}};
}
void from_json(const Json& j, ScenarioState& v) {
  require_object(j, "scenario state");
  get_text(j, "current_scene", v.current_scene);
  get_text_list(j, "npcs_present", v.npcs_present);
  get_text_list(j, "items_present", v.items_present);
  get_text(j, "scene_description", v.scene_description);
}

void to_json(Json& j, const UserState& v) {
  j = Json{{"location", v.location}, {"inventory", v.inventory}, {"situational_context", v.situational_context}};
}
void from_json(const Json& j, UserState& v) {
  require_object(j, "user state");
  get_text(j, "location", v.location);
  get_text_list(j, "inventory", v.inventory);
  get_text(j, "situational_context", v.situational_context);
}

void to_json(Json& j, const ConversationEntry& v) { j = Json{{"action", v.action}, {"output", v.output}}; }
void from_json(const Json& j, ConversationEntry& v) {
  require_object(j, "conversation entry");
  get_text(j, "action", v.action);
  get(j, "output", v.output);
}

void to_json(Json& j, const GameState& v) {
  j = Json{{"task", v.task},
           {"scenario", v.scenario},
           {"user", v.user},
           {"conversation", v.conversation},
           {"phase", v.phase},
           {"turn_index", v.turn_index},
           {"declared_npcs", v.declared_npcs},
           {"declared_items", v.declared_items}};
}
void from_json(const Json& j, GameState& v) {
  require_object(j, "game state");
  get(j, "task", v.task);
  get(j, "scenario", v.scenario);
  get(j, "user", v.user);
  get(j, "conversation", v.conversation);
  get(j, "phase", v.phase);
  get_int(j, "turn_index", v.turn_index);
  get_text_list(j, "declared_npcs", v.declared_npcs);
  get_text_list(j, "declared_items", v.declared_items);
}

// ---------------------------------------------------------------------------
// Psychology track

void to_json(Json& j, const Hint& v) {
  j = Json{{"hint_level", v.level},
           {"hint_text", v.hint_text},
           {"encouragement", v.encouragement},
           {"cognitive_strategy", v.cognitive_strategy},
           {"wait_before_next", v.wait_before_next}};
}
void from_json(const Json& j, Hint& v) {
  require_object(j, "hint");
  if (const Json* level = find(j, "hint_level"); level != nullptr && level->is_number()) {
    const int n = level->get<int>();
    if (n < 1 || n > 3) field_error("hint_level", "expected L1|L2|L3");
    v.level = static_cast<HintLevel>(n);
  } else {
    get(j, "hint_level", v.level);
  }
  get_text(j, "hint_text", v.hint_text);
  get_text(j, "encouragement", v.encouragement);
  get(j, "cognitive_strategy", v.cognitive_strategy);
  get_double(j, "wait_before_next", v.wait_before_next);
}

void to_json(Json& j, const EmotionAssessment& v) {
  j = Json{{"detected_emotion", v.state},
           {"confidence", v.confidence},
           {"emotion_indicators", v.indicators},
           {"emotion_trend", v.trend},
           {"intervention_type", v.intervention},
           {"intervention_content", v.intervention_text},
           {"emotional_support", v.support_text},
           {"suggested_action", v.suggested_action},
           {"degraded", v.degraded}};
}
void from_json(const Json& j, EmotionAssessment& v) {
  require_object(j, "emotion assessment");
  get(j, "detected_emotion", v.state);
  get_int(j, "confidence", v.confidence);
  get_text_list(j, "emotion_indicators", v.indicators);
  get(j, "emotion_trend", v.trend);
  bool needed = true;
  get_bool(j, "intervention_needed", needed);
  v.intervention = InterventionType::none;
  if (needed) get(j, "intervention_type", v.intervention);
  get_text(j, "intervention_content", v.intervention_text);
  get_text(j, "emotional_support", v.support_text);
  get(j, "suggested_action", v.suggested_action);
  get_bool(j, "degraded", v.degraded);
}

// ---------------------------------------------------------------------------
// Tracker report

namespace {

template <typename V>
Json domain_map(const std::map<CognitiveDomain, V>& m) {
  Json out = Json::object();
  for (const auto& [d, value] : m) out[std::string(enum_name(d))] = value;
  return out;
}

}  // namespace

void to_json(Json& j, const CognitionReport& v) {
  j = Json{{"session_id", v.session_id},
           {"profile_id", v.profile_id},
           {"target_domain", v.target_domain},
           {"cognitive_scores", domain_map(v.scores)},
           {"friendly_feedback", domain_map(v.friendly_feedback)},
           {"strengths", v.strengths},
           {"areas_for_improvement", v.areas_for_improvement},
           {"recommendations", v.recommendations},
           {"encouragement", v.encouragement},
           {"progress_analysis", v.progress_analysis},
           {"difficulty_played", v.difficulty_played},
           {"next_difficulty", v.next_difficulty},
           {"failure_rate", v.failure_rate}};
}
void from_json(const Json& j, CognitionReport& v) {
  require_object(j, "cognition report");
  get_text(j, "session_id", v.session_id);
  get_text(j, "player_id", v.profile_id);
  get_text(j, "profile_id", v.profile_id);
  get(j, "target_domain", v.target_domain);
  v.scores.clear();
  if (const Json* s = find(j, "cognitive_scores")) {
    require_object(*s, "scores");
    for (auto it = s->begin(); it != s->end(); ++it) {
      int score = 0;
      get_int(*s, it.key(), score);
      v.scores[parse_domain(it.key())] = score;
    }
  }
  v.friendly_feedback.clear();
  if (const Json* f = find(j, "friendly_feedback")) {
    require_object(*f, "friendly_feedback");
    for (auto it = f->begin(); it != f->end(); ++it) {
      std::string text;
      get_text(*f, it.key(), text);
      v.friendly_feedback[parse_domain(it.key())] = text;
    }
  }
  get_text_list(j, "strengths", v.strengths);
  get_text_list(j, "areas_for_improvement", v.areas_for_improvement);
  get_text_list(j, "recommendations", v.recommendations);
  get_text(j, "encouragement", v.encouragement);
  get_text(j, "progress_analysis", v.progress_analysis);
  get_int(j, "difficulty_played", v.difficulty_played);
  get_int(j, "next_difficulty", v.next_difficulty);
  get_double(j, "failure_rate", v.failure_rate);
}

// ---------------------------------------------------------------------------
// Archive

void to_json(Json& j, const RemeDescriptor& v) { j = Json{{"category", v.category}, {"target", v.target}}; }
void from_json(const Json& j, RemeDescriptor& v) {
  require_object(j, "reme descriptor");
  get_text(j, "category", v.category);
  get_text(j, "target", v.target);
}

void to_json(Json& j, const TurnRecord& v) {
  j = Json{{"player_action", v.player_action},
           {"turn_output", v.turn_output},
           {"hint", v.hint ? Json(*v.hint) : Json(nullptr)},
           {"emotion", v.emotion ? Json(*v.emotion) : Json(nullptr)},
           {"wall_clock_latency", v.wall_clock_latency},
           {"refine_attempts", v.refine_attempts},
           {"approved", v.approved},
           {"reset", v.reset}};
}
void from_json(const Json& j, TurnRecord& v) {
  require_object(j, "turn record");
  get_text(j, "player_action", v.player_action);
  get(j, "turn_output", v.turn_output);
  get(j, "hint", v.hint);
  get(j, "emotion", v.emotion);
  get_double(j, "wall_clock_latency", v.wall_clock_latency);
  get_int(j, "refine_attempts", v.refine_attempts);
  get_bool(j, "approved", v.approved);
  get_bool(j, "reset", v.reset);
}

void to_json(Json& j, const SessionRecord& v) {
  j = Json{{"session_id", v.session_id},
           {"profile_id", v.profile_id},
           {"profile", v.profile},
           {"target_domain", v.target_domain},
           {"method", v.method},
           {"spec", v.spec ? Json(*v.spec) : Json(nullptr)},
           {"reme", v.reme ? Json(*v.reme) : Json(nullptr)},
           {"superseded_specs", v.superseded_specs},
           {"opening", v.opening ? Json(*v.opening) : Json(nullptr)},
           {"turns", v.turns},
           {"tracker_report", v.tracker_report ? Json(*v.tracker_report) : Json(nullptr)},
           {"terminated", v.terminated ? Json(*v.terminated) : Json(nullptr)},
           {"started_at", v.started_at},
           {"ended_at", v.ended_at},
           {"resets", v.resets}};
}
void from_json(const Json& j, SessionRecord& v) {
  require_object(j, "session record");
  get_text(j, "session_id", v.session_id);
  get_text(j, "profile_id", v.profile_id);
  get(j, "profile", v.profile);
  get(j, "target_domain", v.target_domain);
  get(j, "method", v.method);
  get(j, "spec", v.spec);
  get(j, "reme", v.reme);
  get(j, "superseded_specs", v.superseded_specs);
  get(j, "opening", v.opening);
  get(j, "turns", v.turns);
  get(j, "tracker_report", v.tracker_report);
  get(j, "terminated", v.terminated);
  get_text(j, "started_at", v.started_at);
  get_text(j, "ended_at", v.ended_at);
  get_int(j, "resets", v.resets);
}

}  // namespace letgames
