// SPDX-License-Identifier: Apache-2.0
#include "letgames/state.hpp"

#include <algorithm>
#include <set>

#include "letgames/text.hpp"

namespace letgames {
namespace {

bool contains_name(const std::vector<std::string>& names, std::string_view name) {
  const std::string needle = text::trim(name);
  return std::any_of(names.begin(), names.end(), [&](const std::string& n) { return text::trim(n) == needle; });
}

int phase_rank(Phase p) {
  switch (p) {
    case Phase::encoding: return 0;
    case Phase::retention: return 1;
    case Phase::retrieval: return 2;
    case Phase::none: return -1;
  }
  return -1;
}

// Recall answers are usually short lists: "Zhang, Wang and Li".
std::vector<std::string> recall_items(std::string_view expected) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    std::string item = text::trim(current);
    while (!item.empty() && (item.back() == '.' || item.back() == '!')) item.pop_back();
    if (item.size() >= 3) out.push_back(item);
    current.clear();
  };
  const std::string s(expected);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == ',' || s[i] == ';' || s[i] == '\n') {
      flush();
    } else if (s.compare(i, 5, " and ") == 0) {
      flush();
      i += 4;
    } else {
      current.push_back(s[i]);
    }
  }
  flush();
  return out;
}

void add(ValidationReport& report, std::string code, std::string message) {
  report.violations.push_back({std::move(code), std::move(message)});
}

const Json* challenge_field(const GameSpec& spec, const char* key) {
  auto it = spec.extra.find("cognitive_challenges");
  if (it == spec.extra.end() || !it->is_object()) return nullptr;
  auto f = it->find(key);
  return f == it->end() ? nullptr : &*f;
}

int challenge_count(const GameSpec& spec, const char* key) {
  const Json* f = challenge_field(spec, key);
  if (f == nullptr) return -1;
  if (f->is_number()) return f->get<int>();
  if (f->is_string()) return text::leading_int(f->get<std::string>());
  return -1;
}

std::string range_text(const IntRange& r) { return std::to_string(r.lo) + "-" + std::to_string(r.hi); }

void check_entities(ValidationReport& report, const WorldStateUpdate& w, const GameState& state) {
  if (w.npcs_present) {
    for (const auto& n : *w.npcs_present) {
      if (!contains_name(state.declared_npcs, n)) add(report, "UNKNOWN_NPC", "npcs_present lists undeclared NPC '" + n + "'");
    }
  }
  auto check_items = [&](const std::optional<std::vector<std::string>>& list, const char* field) {
    if (!list) return;
    for (const auto& i : *list) {
      if (!contains_name(state.declared_items, i)) {
        add(report, "UNKNOWN_ITEM", std::string(field) + " lists undeclared item '" + i + "'");
      }
    }
  };
  check_items(w.items_present, "items_present");
  check_items(w.player_inventory, "player_inventory");
}

std::string describe_progress(const TaskState& task) {
  const auto done = std::count_if(task.sub_tasks.begin(), task.sub_tasks.end(),
                                  [](const SubTaskProgress& s) { return s.status == TaskStatus::completed; });
  return std::to_string(done) + "/" + std::to_string(task.sub_tasks.size()) + " sub-tasks completed; active: " +
         (task.active_sub_task_id.empty() ? "none" : task.active_sub_task_id);
}

void merge_world(GameState& s, const WorldStateUpdate& w) {
  if (w.current_scene) s.scenario.current_scene = *w.current_scene;
  if (w.scene_description) s.scenario.scene_description = *w.scene_description;
  if (w.player_location) s.user.location = *w.player_location;
  if (w.situational_context) s.user.situational_context = *w.situational_context;
  // Present lists replace the previous value: the controller reports the
  // whole scene, so an NPC who walked away must disappear.
  if (w.npcs_present) s.scenario.npcs_present = *w.npcs_present;
  if (w.items_present) s.scenario.items_present = *w.items_present;
  if (w.player_inventory) s.user.inventory = *w.player_inventory;
}

void apply_task_update(GameState& s, const TaskUpdate& u) {
  auto& subs = s.task.sub_tasks;
  auto it = std::find_if(subs.begin(), subs.end(), [&](const SubTaskProgress& p) { return p.task_id == u.task_id; });
  if (it == subs.end()) throw Error(ErrorCode::stale_task_id, "task_update references unknown sub-task '" + u.task_id + "'");
  it->status = u.status;
  it->progress = std::clamp(u.progress, 0, 100);
  if (u.status == TaskStatus::completed) it->progress = std::max(it->progress, 100);
  switch (u.status) {
    case TaskStatus::in_progress:
      s.task.active_sub_task_id = it->task_id;
      s.phase = it->phase;
      break;
    case TaskStatus::completed: {
      auto next = std::find_if(it + 1, subs.end(), [](const SubTaskProgress& p) { return p.status != TaskStatus::completed; });
      if (next == subs.end()) {
        next = std::find_if(subs.begin(), subs.end(), [](const SubTaskProgress& p) { return p.status != TaskStatus::completed; });
      }
      if (next != subs.end()) {
        s.task.active_sub_task_id = next->task_id;
        s.phase = next->phase;
      }
      break;
    }
    case TaskStatus::pending:
    case TaskStatus::failed:
      break;
  }
  s.task.progress_description = describe_progress(s.task);
}

void guard_entities(const WorldStateUpdate& w, const GameState& state) {
  ValidationReport report;
  check_entities(report, w, state);
  if (!report.ok()) throw Error(ErrorCode::unknown_entity, report.violations.front().message);
}

}  // namespace

bool ValidationReport::has(std::string_view code) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.code == code; });
}

std::vector<std::string> ValidationReport::lines() const {
  std::vector<std::string> out;
  out.reserve(violations.size());
  for (const auto& v : violations) out.push_back(v.code + ": " + v.message);
  return out;
}

ValidationReport validate_spec(const GameSpec& spec, CognitiveDomain target, std::string_view player_name,
                               const SpecConstraints& constraints) {
  ValidationReport report;
  if (spec.difficulty_level < 1 || spec.difficulty_level > 5) {
    add(report, "DIFFICULTY_RANGE", "difficulty_level " + std::to_string(spec.difficulty_level) + " outside 1-5");
  }
  if (constraints.difficulty_level && spec.difficulty_level != *constraints.difficulty_level) {
    add(report, "DIFFICULTY_MISMATCH", "difficulty_level " + std::to_string(spec.difficulty_level) +
                                           " but level " + std::to_string(*constraints.difficulty_level) +
                                           " was requested");
  }
  if (spec.sub_tasks.empty()) add(report, "NO_SUB_TASKS", "spec has no sub_tasks");

  const std::string player = text::trim(player_name);
  std::set<std::string> npc_names;
  for (const auto& npc : spec.npcs) {
    const std::string name = text::trim(npc.name);
    if (name.empty()) {
      add(report, "EMPTY_NPC_NAME", "an NPC has no name");
      continue;
    }
    if (!player.empty() && name == player) {
      add(report, "NPC_NAME_COLLISION", "NPC '" + name + "' shares the player's name");
    }
    if (!npc_names.insert(name).second) add(report, "DUPLICATE_NPC_NAME", "NPC '" + name + "' declared twice");
  }
  std::set<std::string> item_names;
  for (const auto& item : spec.items) {
    const std::string name = text::trim(item.item_name);
    if (!item_names.insert(name).second) add(report, "DUPLICATE_ITEM", "item '" + name + "' declared twice");
  }

  std::set<std::string> task_ids;
  for (const auto& st : spec.sub_tasks) {
    if (st.task_id.empty()) add(report, "MISSING_TASK_ID", "a sub-task has no task_id");
    if (!task_ids.insert(st.task_id).second) add(report, "DUPLICATE_TASK_ID", "task_id '" + st.task_id + "' repeated");
    if (st.difficulty < 1 || st.difficulty > 5) {
      add(report, "SUBTASK_DIFFICULTY_RANGE", "sub-task '" + st.task_id + "' difficulty outside 1-5");
    }
    if (st.progress < 0 || st.progress > 100) {
      add(report, "PROGRESS_RANGE", "sub-task '" + st.task_id + "' progress outside 0-100");
    }
    if (st.npc_trigger && !text::trim(*st.npc_trigger).empty() && !npc_names.count(text::trim(*st.npc_trigger))) {
      add(report, "NPC_TRIGGER_UNKNOWN", "sub-task '" + st.task_id + "' triggers undeclared NPC '" + *st.npc_trigger + "'");
    }
    if (st.phase == Phase::retrieval) {
      if (!st.npc_dialogue || text::trim(*st.npc_dialogue).empty() || !st.expected_recall ||
          text::trim(*st.expected_recall).empty()) {
        add(report, "RETRIEVAL_MISSING_DIALOGUE",
            "retrieval sub-task '" + st.task_id + "' needs npc_dialogue and expected_recall");
      }
    }
  }

  // Retention sub-tasks must not mention what the player will be asked to recall.
  std::vector<std::string> recall;
  for (const auto& st : spec.sub_tasks) {
    if (st.phase == Phase::retrieval && st.expected_recall) {
      for (auto& item : recall_items(*st.expected_recall)) recall.push_back(std::move(item));
    }
  }
  for (const auto& st : spec.sub_tasks) {
    if (st.phase != Phase::retention) continue;
    std::string body = st.description;
    for (const auto& step : st.steps) body += "\n" + step;
    if (st.npc_dialogue) body += "\n" + *st.npc_dialogue;
    if (st.expected_recall && !text::trim(*st.expected_recall).empty()) {
      add(report, "RETENTION_LEAKS_RECALL", "retention sub-task '" + st.task_id + "' carries expected_recall");
      continue;
    }
    for (const auto& item : recall) {
      if (text::mentions_ci(body, item)) {
        add(report, "RETENTION_LEAKS_RECALL", "retention sub-task '" + st.task_id + "' mentions recall item '" + item + "'");
        break;
      }
    }
  }

  if (requires_three_phases(target)) {
    int first[3] = {-1, -1, -1};
    for (std::size_t i = 0; i < spec.sub_tasks.size(); ++i) {
      const int r = phase_rank(spec.sub_tasks[i].phase);
      if (r >= 0 && first[r] < 0) first[r] = static_cast<int>(i);
    }
    static constexpr const char* kNames[3] = {"encoding", "retention", "retrieval"};
    bool all_present = true;
    for (int r = 0; r < 3; ++r) {
      if (first[r] < 0) {
        add(report, "MISSING_PHASE", std::string("no ") + kNames[r] + " sub-task");
        all_present = false;
      }
    }
    if (all_present) {
      // Need some encoding < retention < retrieval chain, in that relative order.
      bool ordered = false;
      for (std::size_t i = 0; i < spec.sub_tasks.size() && !ordered; ++i) {
        if (spec.sub_tasks[i].phase != Phase::encoding) continue;
        for (std::size_t j = i + 1; j < spec.sub_tasks.size() && !ordered; ++j) {
          if (spec.sub_tasks[j].phase != Phase::retention) continue;
          for (std::size_t k = j + 1; k < spec.sub_tasks.size(); ++k) {
            if (spec.sub_tasks[k].phase == Phase::retrieval) {
              ordered = true;
              break;
            }
          }
        }
      }
      if (!ordered) add(report, "PHASE_ORDER", "phases must run encoding, retention, retrieval in that order");
    }
  }

  if (constraints.band) {
    const auto& band = *constraints.band;
    const int npcs = static_cast<int>(spec.npcs.size());
    if (!band.npc_count.contains(npcs)) {
      add(report, "NPC_COUNT_BAND", std::to_string(npcs) + " NPCs outside the " +
                                        std::string(enum_name(band.band)) + " range " + range_text(band.npc_count));
    }
    if (const int load = challenge_count(spec, "memory_load"); load >= 0 && !band.memory_items.contains(load)) {
      add(report, "MEMORY_LOAD_BAND", "memory_load " + std::to_string(load) + " outside " + range_text(band.memory_items));
    }
    if (const int rounds = challenge_count(spec, "retention_rounds");
        rounds >= 0 && !band.retention_rounds.contains(rounds)) {
      add(report, "RETENTION_BAND",
          "retention_rounds " + std::to_string(rounds) + " outside " + range_text(band.retention_rounds));
    }
  }
  return report;
}

std::vector<std::string> mentioned_npcs(const TurnOutput& out, const std::vector<std::string>& declared) {
  std::string body = out.narrative;
  if (out.npc_dialogue) body += "\n" + *out.npc_dialogue;
  for (const auto& a : out.suggested_actions) body += "\n" + a.action;
  std::vector<std::string> found;
  for (const auto& name : declared) {
    const std::string n = text::trim(name);
    if (!n.empty() && text::mentions(body, n)) found.push_back(n);
  }
  return found;
}

std::vector<std::string> effective_npcs(const TurnOutput& out, const GameState& state) {
  return out.world_state_update.npcs_present ? *out.world_state_update.npcs_present : state.scenario.npcs_present;
}

ValidationReport validate_turn_output(const TurnOutput& out, const GameState& state) {
  ValidationReport report;
  if (out.is_question_moment && !out.suggested_actions.empty()) {
    add(report, "QUESTION_MOMENT_ACTIONS", "is_question_moment is true, so suggested_actions must be empty");
  }
  const auto present = effective_npcs(out, state);
  for (const auto& n : mentioned_npcs(out, state.declared_npcs)) {
    if (!contains_name(present, n)) add(report, "NPC_NOT_PRESENT", "'" + n + "' is mentioned but not in npcs_present");
  }
  check_entities(report, out.world_state_update, state);
  if (out.task_update) {
    const auto& subs = state.task.sub_tasks;
    const bool known = std::any_of(subs.begin(), subs.end(),
                                   [&](const SubTaskProgress& p) { return p.task_id == out.task_update->task_id; });
    if (!known) add(report, "STALE_TASK_ID", "task_update references unknown sub-task '" + out.task_update->task_id + "'");
    if (out.task_update->progress < 0 || out.task_update->progress > 100) {
      add(report, "PROGRESS_RANGE", "task_update progress outside 0-100");
    }
  }
  return report;
}

GameState initial_state(const GameSpec& spec) {
  GameState s;
  for (const auto& st : spec.sub_tasks) s.task.sub_tasks.push_back({st.task_id, st.phase, st.status, st.progress});
  auto first = std::find_if(s.task.sub_tasks.begin(), s.task.sub_tasks.end(),
                            [](const SubTaskProgress& p) { return p.status != TaskStatus::completed; });
  if (first != s.task.sub_tasks.end()) {
    s.task.active_sub_task_id = first->task_id;
    s.phase = first->phase;
  }
  s.task.progress_description = describe_progress(s.task);
  s.scenario.current_scene = spec.setting.location;
  s.user.location = spec.setting.location;
  for (const auto& npc : spec.npcs) s.declared_npcs.push_back(text::trim(npc.name));
  for (const auto& item : spec.items) s.declared_items.push_back(text::trim(item.item_name));
  return s;
}

GameState apply_opening(const GameState& state, const TurnOutput& opening) {
  guard_entities(opening.world_state_update, state);
  GameState next = state;
  merge_world(next, opening.world_state_update);
  if (opening.task_update) apply_task_update(next, *opening.task_update);
  return next;
}

GameState apply_turn(const GameState& state, std::string_view action, const TurnOutput& out) {
  guard_entities(out.world_state_update, state);
  GameState next = state;
  if (out.task_update) apply_task_update(next, *out.task_update);
  merge_world(next, out.world_state_update);
  next.conversation.push_back({std::string(action), out});
  next.turn_index = static_cast<int>(next.conversation.size());
  return next;
}

const SubTaskProgress* terminal_sub_task(const GameState& state) {
  return state.task.sub_tasks.empty() ? nullptr : &state.task.sub_tasks.back();
}

bool terminal_completed(const GameState& state) {
  const auto* t = terminal_sub_task(state);
  return t != nullptr && t->status == TaskStatus::completed;
}

}  // namespace letgames
