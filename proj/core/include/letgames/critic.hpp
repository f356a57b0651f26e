// SPDX-License-Identifier: Apache-2.0
//
// Game Critic: a deterministic rule pass for the mechanical consistency checks,
// an optional model review for safety and cultural fit, and the bounded
// critic-in-the-loop refinement.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "letgames/domain.hpp"
#include "letgames/llm.hpp"

namespace letgames {

enum class IssueSeverity { low, medium, high };
template <>
struct EnumNames<IssueSeverity> {
  static constexpr std::array<std::pair<IssueSeverity, std::string_view>, 3> values{
      {{IssueSeverity::low, "low"}, {IssueSeverity::medium, "medium"}, {IssueSeverity::high, "high"}}};
};

namespace issue {
inline constexpr std::string_view kNpcInconsistency = "npc_inconsistency";
inline constexpr std::string_view kPhaseViolation = "phase_violation";
inline constexpr std::string_view kOperationIllegality = "operation_illegality";
inline constexpr std::string_view kActionRepetition = "action_repetition";
}  // namespace issue

struct CritiqueIssue {
  std::string type;
  IssueSeverity severity = IssueSeverity::medium;
  std::string description;
  std::string location;

  bool operator==(const CritiqueIssue&) const = default;
};

struct CritiqueResult {
  bool approved = true;
  int safety_score = 100;
  int consistency_score = 100;
  int cultural_fit_score = 100;
  std::vector<CritiqueIssue> issues;
  std::vector<std::string> suggestions;
  std::optional<double> improvement_delta;

  bool has_issue(std::string_view type) const;
  bool operator==(const CritiqueResult&) const = default;
};

void to_json(Json& j, const IssueSeverity& v);
void from_json(const Json& j, IssueSeverity& v);
void to_json(Json& j, const CritiqueIssue& v);
void from_json(const Json& j, CritiqueIssue& v);
void to_json(Json& j, const CritiqueResult& v);
void from_json(const Json& j, CritiqueResult& v);

/// Phrase lists driving the rule pass. Matching is case-insensitive and whole-word.
struct CriticLexicon {
  std::vector<std::string> recall_verbs{"recall", "remember", "memorize", "memorise", "think about", "keep in mind"};
  std::vector<std::string> mental_verbs{"recall",      "remember", "memorize",   "memorise", "think about",
                                        "keep in mind", "imagine",  "reflect on", "try to remember"};
  // Re-exposure to the source material, illegal once retrieval has begun.
  std::vector<std::string> review_phrases{"check the list", "look at the list", "read the list", "reread",
                                          "re-read",        "review the",       "look again at",  "check the note"};
};

struct CriticContext {
  Phase phase = Phase::none;
  std::vector<std::string> npcs_present;   // after the content's own world update
  std::vector<std::string> declared_npcs;  // from the game spec
  std::vector<std::string> recent_actions;
  bool is_opening_review = false;
};

/// Context for reviewing `out` as the next step from `state`.
CriticContext critic_context(const TurnOutput& out, const GameState& state, std::vector<std::string> recent_actions,
                             bool is_opening_review = false);

/// The four mechanical check families on a turn. Pure.
std::vector<CritiqueIssue> rule_issues(const TurnOutput& out, const CriticContext& ctx,
                                       const CriticLexicon& lexicon = {});

/// Mechanical checks on a designed game (triggers naming unknown NPCs, leaky retention tasks).
std::vector<CritiqueIssue> rule_issues(const GameSpec& spec, const CriticLexicon& lexicon = {});

/// Mean of the flags. Throws EMPTY_SUGGESTIONS for an empty list and
/// INVALID_ARGUMENT when the lengths differ.
double improvement_delta(const std::vector<std::string>& suggestions, const std::vector<bool>& addressed);

inline constexpr double kApprovalDelta = 0.7;
inline constexpr int kIssueConsistencyCeiling = 59;

/// Enforces the scoring laws: any issue caps consistency below 60, two or more
/// issues or a high-severity one reject, and with a delta present approval
/// needs delta >= 0.7.
CritiqueResult apply_critic_laws(CritiqueResult result);

/// Rule-pass verdict with no model involved.
CritiqueResult critique_rules_only(const TurnOutput& out, const CriticContext& ctx, const std::vector<std::string>& prior_suggestions = {},
                                   const std::vector<bool>& addressed = {}, const CriticLexicon& lexicon = {});

class Critic {
 public:
  /// `gateway` may be null: the critic then runs the rule pass alone.
  explicit Critic(LlmGateway* gateway, ModelConfig config = ModelConfig::game_agent(), CriticLexicon lexicon = {});

  /// Rule pass first, then the model review given those findings. Throws
  /// CRITIQUE_FAILED when the model gives no valid review.
  CritiqueResult critique(const TurnOutput& out, const CriticContext& ctx,
                          const std::vector<std::string>& prior_suggestions) const;

  CritiqueResult critique(const GameSpec& spec, CognitiveDomain target,
                          const std::vector<std::string>& prior_suggestions) const;

  const CriticLexicon& lexicon() const { return lexicon_; }

 private:
  CritiqueResult review(const Json& content, std::string_view kind, const Json& context,
                        std::vector<CritiqueIssue> rules, const std::vector<std::string>& prior_suggestions) const;

  LlmGateway* gateway_;
  ModelConfig config_;
  CriticLexicon lexicon_;
};

struct RefineResult {
  TurnOutput output;
  int attempts = 0;  // candidate generations
  bool approved = false;
  std::vector<CritiqueResult> critiques;
};

inline constexpr int kMaxRefinements = 3;

/// Produces a candidate from the accumulated critic feedback (empty on the first call).
using CandidateProducer = std::function<TurnOutput(const std::vector<std::string>& feedback, int attempt)>;
/// Judges a candidate given the suggestions of the previous review.
using CandidateJudge = std::function<CritiqueResult(const TurnOutput&, const std::vector<std::string>& prior_suggestions)>;

/// Returns the first approved candidate, or the last one unapproved after
/// `max_refinements` retries. A judge throwing CRITIQUE_FAILED counts as a
/// rejection without suggestions; producer errors propagate.
RefineResult refine_until_approved(const CandidateProducer& produce, const CandidateJudge& judge,
                                   int max_refinements = kMaxRefinements);

}  // namespace letgames
