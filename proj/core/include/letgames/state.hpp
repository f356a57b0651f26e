// SPDX-License-Identifier: Apache-2.0
//
// Spec validation and the pure game-state transition functions.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "letgames/domain.hpp"

namespace letgames {

struct Violation {
  std::string code;  // e.g. "NPC_NAME_COLLISION"
  std::string message;

  bool operator==(const Violation&) const = default;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(std::string_view code) const;
  /// One "CODE: message" line per violation.
  std::vector<std::string> lines() const;
};

/// Optional calibration constraints checked on top of the structural rules.
struct SpecConstraints {
  std::optional<DifficultyBand> band;
  std::optional<int> difficulty_level;
};

/// Every structural violation of `spec`; never throws, never mutates.
ValidationReport validate_spec(const GameSpec& spec, CognitiveDomain target, std::string_view player_name,
                               const SpecConstraints& constraints = {});

/// Turn-level checks (question moments, NPC and entity references, task ids)
/// evaluated against the state the output would be applied to.
ValidationReport validate_turn_output(const TurnOutput& out, const GameState& state);

/// Fresh state for a spec: first sub-task active, no turns yet.
GameState initial_state(const GameSpec& spec);

/// Applies the opening scene's world update without consuming a turn.
GameState apply_opening(const GameState& state, const TurnOutput& opening);

/// Pure transition: appends (action, out), merges world_state_update, applies
/// task_update and increments turn_index. Throws STALE_TASK_ID for unknown
/// task ids and UNKNOWN_ENTITY for undeclared NPCs or items.
GameState apply_turn(const GameState& state, std::string_view action, const TurnOutput& out);

/// The sub-task that ends the session when completed (last in spec order).
const SubTaskProgress* terminal_sub_task(const GameState& state);
bool terminal_completed(const GameState& state);

/// NPC names (from `declared`) mentioned in the narrative-facing fields of `out`.
std::vector<std::string> mentioned_npcs(const TurnOutput& out, const std::vector<std::string>& declared);

/// The npcs_present list after `out` would be applied to `state`.
std::vector<std::string> effective_npcs(const TurnOutput& out, const GameState& state);

}  // namespace letgames
