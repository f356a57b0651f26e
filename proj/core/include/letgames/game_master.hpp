// SPDX-License-Identifier: Apache-2.0
//
// Game Master coalition: Designer, Controller and Critic.
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "letgames/critic.hpp"
#include "letgames/domain.hpp"
#include "letgames/llm.hpp"

namespace letgames {

/// Parameter ranges of a band.
DifficultyBand band_for(Band band);

/// > 0.5 simplify, [0.3, 0.5] balanced, < 0.3 challenge. Inputs are clamped to [0, 1].
DifficultyBand select_design_band(double failure_rate);

/// Player action used for the opening scene, which consumes no turn.
inline constexpr std::string_view kOpeningAction = "(start the game)";

struct GameMasterConfig {
  ModelConfig model = ModelConfig::game_agent();
  int max_refinements = kMaxRefinements;
  int recent_window = 3;  // actions shown to the controller and the repetition check
};

class GameMaster {
 public:
  explicit GameMaster(LlmGateway& gateway, GameMasterConfig config = {}, CriticLexicon lexicon = {});

  /// Designer call. The returned spec passes validate_spec for `domain`, the
  /// player's name, the band and (when given) the difficulty level; violations
  /// are fed back through the gateway's corrective retries. Throws DESIGN_FAILED.
  GameSpec design_game(CognitiveDomain domain, const PatientProfile& profile, const DifficultyBand& band,
                       std::optional<int> difficulty_level = std::nullopt) const;

  /// One Controller call; the output satisfies validate_turn_output against
  /// `state`. Throws CONTROL_FAILED.
  TurnOutput controller_step(const GameSpec& spec, const GameState& state, std::string_view action,
                             const std::vector<std::string>& critic_feedback = {}) const;

  /// Controller step wrapped in the critic loop.
  RefineResult refined_step(const GameSpec& spec, const GameState& state, std::string_view action) const;

  /// Opening scene for a fresh state, reviewed as an opening.
  RefineResult opening(const GameSpec& spec, const GameState& state) const;

  const Critic& critic() const { return critic_; }
  const GameMasterConfig& config() const { return config_; }

 private:
  RefineResult refine(const GameSpec& spec, const GameState& state, std::string_view action, bool opening) const;

  LlmGateway& gateway_;
  GameMasterConfig config_;
  Critic critic_;
};

/// Last `window` player actions of the conversation, oldest first.
std::vector<std::string> recent_actions(const GameState& state, int window);

}  // namespace letgames
