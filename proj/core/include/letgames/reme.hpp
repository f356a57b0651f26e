// SPDX-License-Identifier: Apache-2.0
//
// ReMe twenty-questions baseline. Game logic is fixed; only the yes/no
// judgment goes to the model.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "letgames/domain.hpp"
#include "letgames/llm.hpp"

namespace letgames {

struct RemeItem {
  std::string name;
  std::vector<std::string> synonyms;
  std::vector<std::string> features;  // keywords the synthetic provider answers "yes" to

  bool operator==(const RemeItem&) const = default;
};

struct RemeCandidates {
  std::vector<std::pair<std::string, std::vector<RemeItem>>> categories;  // fixture order

  /// `{category: [item, ...]}` where an item is a name or
  /// `{"name", "synonyms", "features"}`. Throws Error(parse_error).
  static RemeCandidates from_json(const Json& j);
  /// Throws Error(io_error) / Error(parse_error).
  static RemeCandidates load(const std::filesystem::path& path);

  std::size_t item_count() const;
  const RemeItem* find(std::string_view category, std::string_view item) const;
};

struct RemeExchange {
  std::string question;
  std::string answer;

  bool operator==(const RemeExchange&) const = default;
};

struct RemeGame {
  std::string category;
  RemeItem target;
  std::vector<RemeExchange> history;
  bool ended = false;
  bool solved = false;

  int questions_answered() const;
  bool operator==(const RemeGame&) const = default;
};

enum class RemeReplyKind { answer, redirect, summary, solved, out_of_questions };

struct RemeReply {
  std::string thoughts;
  std::string outputs;
  bool is_end = false;
  RemeReplyKind kind = RemeReplyKind::answer;
};

/// Seeded uniform choice of a category, then of an item. Throws EMPTY_CANDIDATES.
RemeGame reme_start(const RemeCandidates& candidates, std::uint64_t seed);

/// Whole-word, case-insensitive "hint" / "help" (and "clue"/"clues").
bool is_hint_request(std::string_view input);
/// Requests that cannot be answered with yes or no ("what letter...").
bool is_open_question(std::string_view input);
/// The input names the target or one of its synonyms.
bool names_target(const RemeGame& game, std::string_view input);

/// Opening message announcing the category.
std::string reme_opening(const RemeGame& game);

class RemeEngine {
 public:
  explicit RemeEngine(LlmGateway& gateway, ModelConfig config = ModelConfig::game_agent(), int max_questions = 20);

  /// Throws GAME_ENDED on a finished game and SCHEMA_EXHAUSTED when the model
  /// gives no valid yes/no answer. Pre-terminal outputs never contain the target.
  std::pair<RemeGame, RemeReply> answer(const RemeGame& game, std::string_view player_input) const;

  int max_questions() const { return max_questions_; }

 private:
  LlmGateway& gateway_;
  ModelConfig config_;
  int max_questions_;
};

}  // namespace letgames
