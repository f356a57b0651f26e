// SPDX-License-Identifier: Apache-2.0
#include "letgames/game_master.hpp"

#include <algorithm>
#include <cmath>

#include "agent_util.hpp"
#include "letgames/schemas.hpp"
#include "letgames/state.hpp"

namespace letgames {

DifficultyBand band_for(Band band) {
  switch (band) {
    case Band::simplify:
      return {Band::simplify, {2, 3}, {1, 2}, {2, 3}};
    case Band::balanced:
      return {Band::balanced, {3, 5}, {2, 3}, {3, 4}};
    case Band::challenge:
      return {Band::challenge, {5, 7}, {3, 4}, {5, 7}};
  }
  return band_for(Band::balanced);
}

DifficultyBand select_design_band(double failure_rate) {
  const double r = std::isnan(failure_rate) ? 0.0 : std::clamp(failure_rate, 0.0, 1.0);
  if (r > 0.5) return band_for(Band::simplify);
  if (r >= 0.3) return band_for(Band::balanced);
  return band_for(Band::challenge);
}

std::vector<std::string> recent_actions(const GameState& state, int window) {
  std::vector<std::string> out;
  const auto n = static_cast<int>(state.conversation.size());
  for (int i = std::max(0, n - window); i < n; ++i) out.push_back(state.conversation[static_cast<std::size_t>(i)].action);
  return out;
}

namespace {

Json range_json(const IntRange& r) { return Json{{"min", r.lo}, {"max", r.hi}}; }

Json designer_profile(const PatientProfile& p) {
  return Json{{"name", p.name},
              {"age", p.age},
              {"gender", p.gender},
              {"occupation", p.occupation},
              {"life_experience", p.life_experience}};
}

Json controller_view(const GameSpec& spec) {
  Json npcs = Json::array();
  for (const auto& n : spec.npcs) {
    npcs.push_back({{"name", n.name}, {"relationship", n.relationship}, {"speech_style", n.speech_style}});
  }
  Json items = Json::array();
  for (const auto& i : spec.items) items.push_back(i.item_name);
  return Json{{"scenario_name", spec.scenario_name},
              {"setting", encode(spec.setting)},
              {"story_background", spec.story_background},
              {"npcs", npcs},
              {"items", items},
              {"main_task", encode(spec.main_task)},
              {"sub_tasks", encode(spec.sub_tasks)},
              {"success_criteria", spec.success_criteria}};
}

Json state_view(const GameState& s) {
  return Json{{"active_sub_task_id", s.task.active_sub_task_id},
              {"phase", s.phase},
              {"current_scene", s.scenario.current_scene},
              {"player_location", s.user.location},
              {"npcs_present", s.scenario.npcs_present},
              {"items_present", s.scenario.items_present},
              {"player_inventory", s.user.inventory},
              {"sub_task_status", encode(s.task.sub_tasks)},
              {"turn_index", s.turn_index}};
}

}  // namespace

GameMaster::GameMaster(LlmGateway& gateway, GameMasterConfig config, CriticLexicon lexicon)
    : gateway_(gateway), config_(std::move(config)), critic_(&gateway, config_.model, std::move(lexicon)) {}

GameSpec GameMaster::design_game(CognitiveDomain domain, const PatientProfile& profile, const DifficultyBand& band,
                                 std::optional<int> difficulty_level) const {
  Json ctx{{"target_domain", domain},
           {"profile", designer_profile(profile)},
           {"band",
            {{"band", std::string(enum_name(band.band))},
             {"memory_items", range_json(band.memory_items)},
             {"npc_count", range_json(band.npc_count)},
             {"retention_rounds", range_json(band.retention_rounds)}}},
           {"requires_three_phases", requires_three_phases(domain)}};
  if (difficulty_level) ctx["difficulty_level"] = *difficulty_level;
  auto req = detail::agent_request(prompts::kGameDesigner, schema::kGameSpec, std::move(ctx), config_.model);

  SpecConstraints constraints{band, difficulty_level};
  const std::string player = profile.name;
  auto check = [&](const Json& doc) {
    return detail::decode_then<GameSpec>(doc, [&](const GameSpec& spec) {
      return validate_spec(spec, domain, player, constraints).lines();
    });
  };
  try {
    auto resp = gateway_.complete_structured(std::move(req), std::string(schema::kGameSpec), check);
    return decode<GameSpec>(*resp.parsed_document);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::schema_exhausted || e.code() == ErrorCode::provider_unavailable) {
      throw Error(ErrorCode::design_failed, e.what());
    }
    throw;
  }
}

TurnOutput GameMaster::controller_step(const GameSpec& spec, const GameState& state, std::string_view action,
                                       const std::vector<std::string>& critic_feedback) const {
  Json recent = Json::array();
  const auto n = static_cast<int>(state.conversation.size());
  for (int i = std::max(0, n - config_.recent_window); i < n; ++i) {
    const auto& e = state.conversation[static_cast<std::size_t>(i)];
    recent.push_back({{"action", e.action},
                      {"narrative", e.output.narrative},
                      {"is_action_successful", e.output.is_action_successful}});
  }
  Json active = nullptr;
  for (const auto& t : spec.sub_tasks) {
    if (t.task_id == state.task.active_sub_task_id) active = encode(t);
  }
  Json ctx{{"spec", controller_view(spec)},
           {"state", state_view(state)},
           {"phase", state.phase},
           {"active_sub_task", active},
           {"recent_turns", recent},
           {"action", std::string(action)},
           {"is_opening", action == kOpeningAction},
           {"critic_feedback", critic_feedback}};
  auto req = detail::agent_request(prompts::kGameController, schema::kTurnOutput, std::move(ctx), config_.model);
  auto check = [&](const Json& doc) {
    return detail::decode_then<TurnOutput>(doc, [&](const TurnOutput& out) {
      return validate_turn_output(out, state).lines();
    });
  };
  try {
    auto resp = gateway_.complete_structured(std::move(req), std::string(schema::kTurnOutput), check);
    return decode<TurnOutput>(*resp.parsed_document);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::schema_exhausted || e.code() == ErrorCode::provider_unavailable) {
      throw Error(ErrorCode::control_failed, e.what());
    }
    throw;
  }
}

RefineResult GameMaster::refine(const GameSpec& spec, const GameState& state, std::string_view action,
                                bool opening) const {
  auto recent = recent_actions(state, config_.recent_window);
  if (!opening) recent.emplace_back(action);
  auto produce = [&](const std::vector<std::string>& feedback, int) {
    return controller_step(spec, state, action, feedback);
  };
  auto judge = [&](const TurnOutput& out, const std::vector<std::string>& prior) {
    return critic_.critique(out, critic_context(out, state, recent, opening), prior);
  };
  return refine_until_approved(produce, judge, config_.max_refinements);
}

RefineResult GameMaster::refined_step(const GameSpec& spec, const GameState& state, std::string_view action) const {
  return refine(spec, state, action, false);
}

RefineResult GameMaster::opening(const GameSpec& spec, const GameState& state) const {
  return refine(spec, state, kOpeningAction, true);
}

}  // namespace letgames
