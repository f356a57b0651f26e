// SPDX-License-Identifier: Apache-2.0
#include "letgames/critic.hpp"

#include <algorithm>

#include <spdlog/spdlog.h>

#include "agent_util.hpp"
#include "letgames/schemas.hpp"
#include "letgames/state.hpp"
#include "letgames/text.hpp"

namespace letgames {

bool CritiqueResult::has_issue(std::string_view type) const {
  return std::any_of(issues.begin(), issues.end(), [&](const CritiqueIssue& i) { return i.type == type; });
}

void to_json(Json& j, const IssueSeverity& v) { j = std::string(enum_name(v)); }
void from_json(const Json& j, IssueSeverity& v) { v = enum_require<IssueSeverity>(j.get<std::string>(), "severity"); }

void to_json(Json& j, const CritiqueIssue& v) {
  j = Json{{"type", v.type}, {"severity", v.severity}, {"description", v.description}, {"location", v.location}};
}

void from_json(const Json& j, CritiqueIssue& v) {
  v = CritiqueIssue{};
  v.type = j.at("type").get<std::string>();
  if (j.contains("severity") && !j["severity"].is_null()) v.severity = j["severity"].get<IssueSeverity>();
  if (j.contains("description") && j["description"].is_string()) v.description = j["description"].get<std::string>();
  if (j.contains("location") && j["location"].is_string()) v.location = j["location"].get<std::string>();
}

void to_json(Json& j, const CritiqueResult& v) {
  j = Json{{"approved", v.approved},
           {"safety_score", v.safety_score},
           {"consistency_score", v.consistency_score},
           {"cultural_fit_score", v.cultural_fit_score},
           {"issues", v.issues},
           {"suggestions", v.suggestions},
           {"improvement_delta", v.improvement_delta ? Json(*v.improvement_delta) : Json(nullptr)}};
}

void from_json(const Json& j, CritiqueResult& v) {
  v = CritiqueResult{};
  v.approved = j.at("approved").get<bool>();
  v.safety_score = static_cast<int>(j.value("safety_score", 100.0));
  v.consistency_score = static_cast<int>(j.value("consistency_score", 100.0));
  v.cultural_fit_score = static_cast<int>(j.value("cultural_fit_score", 100.0));
  if (j.contains("issues")) v.issues = j["issues"].get<std::vector<CritiqueIssue>>();
  if (j.contains("suggestions")) v.suggestions = j["suggestions"].get<std::vector<std::string>>();
  if (j.contains("improvement_delta") && j["improvement_delta"].is_number()) {
    v.improvement_delta = j["improvement_delta"].get<double>();
  }
}

namespace {

std::string first_phrase(std::string_view body, const std::vector<std::string>& lexicon) {
  for (const auto& p : lexicon) {
    if (text::mentions_ci(body, p)) return p;
  }
  return {};
}

bool contains_name(const std::vector<std::string>& names, std::string_view name) {
  return std::any_of(names.begin(), names.end(), [&](const std::string& n) { return text::trim(n) == name; });
}

}  // namespace

CriticContext critic_context(const TurnOutput& out, const GameState& state, std::vector<std::string> recent_actions,
                             bool is_opening_review) {
  CriticContext ctx;
  // Judge the turn against the phase it leaves the game in, so the hand-off
  // from retention into a retrieval question is not read as a retention turn.
  try {
    ctx.phase = apply_turn(state, "", out).phase;
  } catch (const Error&) {
    ctx.phase = state.phase;
  }
  ctx.npcs_present = effective_npcs(out, state);
  ctx.declared_npcs = state.declared_npcs;
  ctx.recent_actions = std::move(recent_actions);
  ctx.is_opening_review = is_opening_review;
  return ctx;
}

std::vector<CritiqueIssue> rule_issues(const TurnOutput& out, const CriticContext& ctx, const CriticLexicon& lexicon) {
  std::vector<CritiqueIssue> issues;
  auto add = [&](std::string_view type, IssueSeverity sev, std::string description, std::string location) {
    issues.push_back({std::string(type), sev, std::move(description), std::move(location)});
  };

  for (const auto& name : mentioned_npcs(out, ctx.declared_npcs)) {
    if (!contains_name(ctx.npcs_present, name)) {
      add(issue::kNpcInconsistency, IssueSeverity::high,
          name + " is mentioned but is not in npcs_present; add them to the scene or remove the mention", "narrative");
    }
  }

  const bool review_suggestions = !ctx.is_opening_review;
  auto for_each_suggestion = [&](auto&& fn) {
    if (!review_suggestions) return;
    for (std::size_t i = 0; i < out.suggested_actions.size(); ++i) {
      fn(out.suggested_actions[i].action, "suggested_actions[" + std::to_string(i) + "]");
    }
  };

  switch (ctx.phase) {
    case Phase::encoding:
      for_each_suggestion([&](const std::string& action, const std::string& loc) {
        if (auto p = first_phrase(action, lexicon.recall_verbs); !p.empty()) {
          add(issue::kPhaseViolation, IssueSeverity::high,
              "encoding must only present information; \"" + action + "\" asks the player to " + p, loc);
        }
      });
      if (out.is_question_moment) {
        add(issue::kPhaseViolation, IssueSeverity::high, "no questions may be asked during encoding",
            "is_question_moment");
      }
      break;
    case Phase::retention: {
      for_each_suggestion([&](const std::string& action, const std::string& loc) {
        if (auto p = first_phrase(action, lexicon.recall_verbs); !p.empty()) {
          add(issue::kPhaseViolation, IssueSeverity::high,
              "retention must not prompt rehearsal; \"" + action + "\" asks the player to " + p, loc);
        }
      });
      std::string body = out.narrative + "\n" + out.current_goal;
      if (out.npc_dialogue) body += "\n" + *out.npc_dialogue;
      if (auto p = first_phrase(body, lexicon.recall_verbs); !p.empty()) {
        add(issue::kPhaseViolation, IssueSeverity::high, "retention narrative prompts the player to " + p,
            "narrative");
      }
      if (out.is_question_moment) {
        add(issue::kPhaseViolation, IssueSeverity::high, "no recall questions may be asked during retention",
            "is_question_moment");
      }
      break;
    }
    case Phase::retrieval:
      for_each_suggestion([&](const std::string& action, const std::string& loc) {
        if (auto p = first_phrase(action, lexicon.review_phrases); !p.empty()) {
          add(issue::kPhaseViolation, IssueSeverity::high,
              "retrieval must not re-expose the source material (\"" + action + "\")", loc);
        }
      });
      break;
    case Phase::none:
      break;
  }

  for_each_suggestion([&](const std::string& action, const std::string& loc) {
    if (auto p = first_phrase(action, lexicon.mental_verbs); !p.empty()) {
      add(issue::kOperationIllegality, IssueSeverity::high,
          "\"" + action + "\" is a mental act (" + p + "); suggest something the player can do in the world", loc);
    }
  });

  for_each_suggestion([&](const std::string& action, const std::string& loc) {
    const std::string norm = text::to_lower(text::trim(action));
    for (const auto& recent : ctx.recent_actions) {
      if (!norm.empty() && norm == text::to_lower(text::trim(recent))) {
        add(issue::kActionRepetition, IssueSeverity::medium,
            "\"" + action + "\" repeats an action the player just took", loc);
        break;
      }
    }
  });
  return issues;
}

std::vector<CritiqueIssue> rule_issues(const GameSpec& spec, const CriticLexicon& lexicon) {
  std::vector<CritiqueIssue> issues;
  std::vector<std::string> names;
  for (const auto& n : spec.npcs) names.push_back(text::trim(n.name));
  for (const auto& t : spec.sub_tasks) {
    if (t.npc_trigger && !text::trim(*t.npc_trigger).empty() && !contains_name(names, text::trim(*t.npc_trigger))) {
      issues.push_back({std::string(issue::kNpcInconsistency), IssueSeverity::high,
                        "sub-task " + t.task_id + " is triggered by undeclared NPC " + *t.npc_trigger,
                        "sub_tasks." + t.task_id});
    }
    if (t.phase == Phase::retention) {
      std::string body = t.description;
      for (const auto& s : t.steps) body += "\n" + s;
      if (auto p = first_phrase(body, lexicon.recall_verbs); !p.empty()) {
        issues.push_back({std::string(issue::kPhaseViolation), IssueSeverity::high,
                          "retention sub-task " + t.task_id + " prompts the player to " + p,
                          "sub_tasks." + t.task_id});
      }
    }
  }
  return issues;
}

double improvement_delta(const std::vector<std::string>& suggestions, const std::vector<bool>& addressed) {
  if (suggestions.empty()) throw Error(ErrorCode::empty_suggestions, "no prior suggestions to measure against");
  if (addressed.size() != suggestions.size()) {
    throw Error(ErrorCode::invalid_argument, "expected " + std::to_string(suggestions.size()) +
                                                 " addressed flags, got " + std::to_string(addressed.size()));
  }
  const auto hits = std::count(addressed.begin(), addressed.end(), true);
  return static_cast<double>(hits) / static_cast<double>(suggestions.size());
}

CritiqueResult apply_critic_laws(CritiqueResult result) {
  if (!result.issues.empty()) {
    result.consistency_score = std::min(result.consistency_score, kIssueConsistencyCeiling);
  }
  const bool any_high = std::any_of(result.issues.begin(), result.issues.end(),
                                    [](const CritiqueIssue& i) { return i.severity == IssueSeverity::high; });
  if (result.issues.size() >= 2 || any_high) result.approved = false;
  // Tolerance keeps 7/10 (which is 0.7 in exact arithmetic) on the approving side.
  if (result.improvement_delta && *result.improvement_delta < kApprovalDelta - 1e-12) result.approved = false;
  return result;
}

namespace {

std::vector<std::string> issue_suggestions(const std::vector<CritiqueIssue>& issues) {
  std::vector<std::string> out;
  for (const auto& i : issues) out.push_back(i.type + ": " + i.description);
  return out;
}

}  // namespace

CritiqueResult critique_rules_only(const TurnOutput& out, const CriticContext& ctx,
                                   const std::vector<std::string>& prior_suggestions,
                                   const std::vector<bool>& addressed, const CriticLexicon& lexicon) {
  CritiqueResult r;
  r.issues = rule_issues(out, ctx, lexicon);
  r.suggestions = issue_suggestions(r.issues);
  if (!prior_suggestions.empty() && !addressed.empty()) r.improvement_delta = improvement_delta(prior_suggestions, addressed);
  return apply_critic_laws(std::move(r));
}

Critic::Critic(LlmGateway* gateway, ModelConfig config, CriticLexicon lexicon)
    : gateway_(gateway), config_(std::move(config)), lexicon_(std::move(lexicon)) {}

CritiqueResult Critic::critique(const TurnOutput& out, const CriticContext& ctx,
                                const std::vector<std::string>& prior_suggestions) const {
  auto rules = rule_issues(out, ctx, lexicon_);
  if (gateway_ == nullptr) return critique_rules_only(out, ctx, {}, {}, lexicon_);
  Json context{{"phase", ctx.phase},
               {"npcs_present", ctx.npcs_present},
               {"recent_actions", ctx.recent_actions},
               {"is_opening_review", ctx.is_opening_review}};
  return review(encode(out), "turn_output", context, std::move(rules), prior_suggestions);
}

CritiqueResult Critic::critique(const GameSpec& spec, CognitiveDomain target,
                                const std::vector<std::string>& prior_suggestions) const {
  auto rules = rule_issues(spec, lexicon_);
  if (gateway_ == nullptr) {
    CritiqueResult r;
    r.issues = std::move(rules);
    r.suggestions = issue_suggestions(r.issues);
    return apply_critic_laws(std::move(r));
  }
  Json context{{"target_domain", target}, {"is_opening_review", false}};
  return review(encode(spec), "game_spec", context, std::move(rules), prior_suggestions);
}

CritiqueResult Critic::review(const Json& content, std::string_view kind, const Json& context,
                              std::vector<CritiqueIssue> rules, const std::vector<std::string>& prior_suggestions) const {
  Json user = context;
  user["content_kind"] = std::string(kind);
  user["content"] = content;
  user["rule_issues"] = rules;
  user["prior_suggestions"] = prior_suggestions;
  auto req = detail::agent_request(prompts::kGameCritic, schema::kCritique, std::move(user), config_);

  const std::size_t expected = prior_suggestions.size();
  auto check = [expected](const Json& doc) {
    std::vector<std::string> v;
    if (expected > 0) {
      if (!doc.contains("addressed") || !doc["addressed"].is_array() || doc["addressed"].size() != expected) {
        v.push_back("addressed: must list " + std::to_string(expected) + " true/false flags, one per prior suggestion");
      }
    }
    return v;
  };

  ChatResponse resp;
  try {
    resp = gateway_->complete_structured(std::move(req), std::string(schema::kCritique), check);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::schema_exhausted || e.code() == ErrorCode::provider_unavailable) {
      throw Error(ErrorCode::critique_failed, e.what());
    }
    throw;
  }
  const Json& doc = *resp.parsed_document;
  CritiqueResult model = decode<CritiqueResult>(doc);

  CritiqueResult r;
  r.approved = model.approved;
  r.safety_score = model.safety_score;
  r.consistency_score = model.consistency_score;
  r.cultural_fit_score = model.cultural_fit_score;
  r.issues = rules;
  for (auto& i : model.issues) {
    const bool dup = std::any_of(rules.begin(), rules.end(), [&](const CritiqueIssue& ri) {
      return ri.type == i.type && (i.location.empty() || ri.location == i.location);
    });
    if (!dup) r.issues.push_back(std::move(i));
  }
  r.suggestions = issue_suggestions(rules);
  for (auto& s : model.suggestions) r.suggestions.push_back(std::move(s));
  if (expected > 0) {
    r.improvement_delta = improvement_delta(prior_suggestions, doc["addressed"].get<std::vector<bool>>());
  }
  return apply_critic_laws(std::move(r));
}

RefineResult refine_until_approved(const CandidateProducer& produce, const CandidateJudge& judge,
                                   int max_refinements) {
  RefineResult result;
  std::vector<std::string> feedback;
  std::vector<std::string> prior;
  const int budget = std::max(0, max_refinements) + 1;
  for (int attempt = 1; attempt <= budget; ++attempt) {
    result.output = produce(feedback, attempt);
    result.attempts = attempt;
    CritiqueResult verdict;
    try {
      verdict = judge(result.output, prior);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::critique_failed) throw;
      spdlog::warn("[critic] review failed, treating candidate {} as rejected: {}", attempt, e.what());
      verdict.approved = false;
    }
    result.critiques.push_back(verdict);
    if (verdict.approved) {
      result.approved = true;
      return result;
    }
    feedback = verdict.suggestions;
    for (const auto& i : verdict.issues) {
      const std::string line = i.type + ": " + i.description;
      if (std::find(feedback.begin(), feedback.end(), line) == feedback.end()) feedback.push_back(line);
    }
    prior = verdict.suggestions;
  }
  result.approved = false;
  return result;
}

}  // namespace letgames
