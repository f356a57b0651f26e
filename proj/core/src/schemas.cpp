// SPDX-License-Identifier: Apache-2.0
#include "letgames/schemas.hpp"

#include <algorithm>

#include "letgames/codec.hpp"

namespace letgames::schema {
namespace {

// Collects human-readable violations for one JSON object; the text is sent
// back to the model verbatim on a corrective retry.
class Checker {
 public:
  Checker(const Json& doc, std::string path, std::vector<std::string>& out)
      : doc_(doc), path_(std::move(path)), out_(out) {}

  const Json* field(std::string_view key, bool required = true) {
    auto it = doc_.find(key);
    if (it == doc_.end() || it->is_null()) {
      if (required) fail(key, "is required");
      return nullptr;
    }
    return &*it;
  }

  void text(std::string_view key, bool non_empty = true, bool required = true) {
    const Json* v = field(key, required);
    if (v == nullptr) return;
    if (!v->is_string()) {
      fail(key, "must be a string");
    } else if (non_empty && v->get<std::string>().find_first_not_of(" \t\n") == std::string::npos) {
      fail(key, "must not be empty");
    }
  }

  void boolean(std::string_view key, bool required = true) {
    const Json* v = field(key, required);
    if (v != nullptr && !v->is_boolean()) fail(key, "must be true or false");
  }

  void number(std::string_view key, double lo, double hi, bool integer, bool required = true) {
    const Json* v = field(key, required);
    if (v == nullptr) return;
    if (!v->is_number()) {
      fail(key, integer ? "must be an integer" : "must be a number");
      return;
    }
    const double d = v->get<double>();
    if (integer && d != static_cast<double>(static_cast<long long>(d))) fail(key, "must be an integer");
    if (d < lo || d > hi) fail(key, "must be within [" + fmt(lo) + ", " + fmt(hi) + "]");
  }

  const Json* array(std::string_view key, bool non_empty = false, bool required = true) {
    const Json* v = field(key, required);
    if (v == nullptr) return nullptr;
    if (!v->is_array()) {
      fail(key, "must be a list");
      return nullptr;
    }
    if (non_empty && v->empty()) fail(key, "must not be empty");
    return v;
  }

  void text_list(std::string_view key, bool non_empty = false, bool required = true) {
    const Json* v = array(key, non_empty, required);
    if (v == nullptr) return;
    for (const auto& e : *v) {
      if (!e.is_string()) {
        fail(key, "must contain only strings");
        return;
      }
    }
  }

  const Json* object(std::string_view key, bool required = true) {
    const Json* v = field(key, required);
    if (v == nullptr) return nullptr;
    if (!v->is_object()) {
      fail(key, "must be an object");
      return nullptr;
    }
    return v;
  }

  template <typename E>
  void enumeration(std::string_view key, bool required = true) {
    const Json* v = field(key, required);
    if (v == nullptr) return;
    if (!v->is_string() || !enum_parse<E>(v->get<std::string>())) {
      std::string allowed;
      for (const auto& [e, n] : EnumNames<E>::values) allowed += (allowed.empty() ? "" : "|") + std::string(n);
      fail(key, "must be one of " + allowed);
    }
  }

  void domain(std::string_view key, bool required = true) {
    const Json* v = field(key, required);
    if (v == nullptr) return;
    if (!v->is_string()) {
      fail(key, "must be a cognitive domain name");
      return;
    }
    try {
      parse_domain(v->get<std::string>());
    } catch (const Error&) {
      fail(key, "unknown cognitive domain '" + v->get<std::string>() + "'");
    }
  }

  Checker nested(std::string_view key, const Json& sub) { return Checker(sub, path(key), out_); }

  void fail(std::string_view key, const std::string& why) { out_.push_back(path(key) + " " + why); }

  std::string path(std::string_view key) const { return path_.empty() ? std::string(key) : path_ + "." + std::string(key); }

 private:
  static std::string fmt(double d) {
    return d == static_cast<double>(static_cast<long long>(d)) ? std::to_string(static_cast<long long>(d))
                                                               : std::to_string(d);
  }

  const Json& doc_;
  std::string path_;
  std::vector<std::string>& out_;
};

template <typename T>
void try_decode(const Json& doc, std::vector<std::string>& out) {
  if (!out.empty()) return;  // decode errors would only repeat the checker's findings
  try {
    (void)decode<T>(doc);
  } catch (const Error& e) {
    out.emplace_back(e.what());
  }
}

void scored(Checker& c, const Json& doc, std::string_view key, std::string_view score_key, double hi) {
  if (const Json* o = c.object(key)) {
    auto sub = c.nested(key, *o);
    sub.number(score_key, 0, hi, true);
  }
  (void)doc;
}

}  // namespace

bool is_risk_behavior_code(std::string_view code) {
  return std::find(kRiskBehaviorCodes.begin(), kRiskBehaviorCodes.end(), code) != kRiskBehaviorCodes.end();
}

std::vector<std::string> validate_game_spec(const Json& doc) {
  std::vector<std::string> out;
  Checker c(doc, "", out);
  c.text("scenario_name");
  c.enumeration<ScenarioType>("scenario_type");
  c.number("difficulty_level", 1, 5, true);
  if (!doc.contains("main_task")) c.fail("main_task", "is required");
  if (const Json* npcs = c.array("npcs")) {
    for (std::size_t i = 0; i < npcs->size(); ++i) {
      const auto& npc = (*npcs)[i];
      if (!npc.is_object()) {
        c.fail("npcs[" + std::to_string(i) + "]", "must be an object");
        continue;
      }
      c.nested("npcs[" + std::to_string(i) + "]", npc).text("name");
    }
  }
  if (const Json* subs = c.array("sub_tasks", true)) {
    for (std::size_t i = 0; i < subs->size(); ++i) {
      const auto& st = (*subs)[i];
      const std::string key = "sub_tasks[" + std::to_string(i) + "]";
      if (!st.is_object()) {
        c.fail(key, "must be an object");
        continue;
      }
      auto sc = c.nested(key, st);
      sc.text("task_id");
      sc.text("description");
      sc.enumeration<Phase>("phase", false);
      sc.number("difficulty", 1, 5, true, false);
      if (st.contains("cognitive_function") && !st["cognitive_function"].is_null()) sc.domain("cognitive_function");
      if (st.contains("status") && !st["status"].is_null()) sc.enumeration<TaskStatus>("status");
    }
  }
  try_decode<GameSpec>(doc, out);
  return out;
}

std::vector<std::string> validate_turn_output(const Json& doc) {
  std::vector<std::string> out;
  Checker c(doc, "", out);
  c.text("narrative");
  c.text("current_situation", false);
  c.text("current_goal", false);
  c.boolean("is_action_successful");
  c.boolean("is_question_moment");
  if (const Json* actions = c.array("suggested_actions")) {
    for (std::size_t i = 0; i < actions->size(); ++i) {
      const auto& a = (*actions)[i];
      const std::string key = "suggested_actions[" + std::to_string(i) + "]";
      if (!a.is_object()) {
        c.fail(key, "must be an object with action, action_id, type");
        continue;
      }
      auto ac = c.nested(key, a);
      ac.text("action");
      ac.enumeration<ActionType>("type", false);
    }
  }
  c.object("world_state_update");
  if (const Json* t = c.object("task_update", false); t != nullptr && !t->empty()) {
    auto tc = c.nested("task_update", *t);
    tc.text("task_id");
    tc.enumeration<TaskStatus>("status");
    tc.number("progress", 0, 100, true);
  }
  try_decode<TurnOutput>(doc, out);
  return out;
}

std::vector<std::string> validate_critique(const Json& doc) {
  std::vector<std::string> out;
  Checker c(doc, "", out);
  c.boolean("approved");
  c.number("safety_score", 0, 100, true);
  c.number("consistency_score", 0, 100, true);
  c.number("cultural_fit_score", 0, 100, true);
  if (const Json* issues = c.array("issues")) {
    for (std::size_t i = 0; i < issues->size(); ++i) {
      const auto& is = (*issues)[i];
      const std::string key = "issues[" + std::to_string(i) + "]";
      if (!is.is_object()) {
        c.fail(key, "must be an object");
        continue;
      }
      auto ic = c.nested(key, is);
      ic.text("type");
      const Json* sev = ic.field("severity");
      if (sev != nullptr && (!sev->is_string() || (*sev != "low" && *sev != "medium" && *sev != "high"))) {
        ic.fail("severity", "must be one of low|medium|high");
      }
      ic.text("description", false, false);
    }
  }
  c.text_list("suggestions");
  if (const Json* addressed = c.array("addressed", false, false)) {
    for (const auto& a : *addressed) {
      if (!a.is_boolean()) {
        c.fail("addressed", "must contain only true/false");
        break;
      }
    }
  }
  return out;
}

std::vector<std::string> validate_hint(const Json& doc) {
  std::vector<std::string> out;
  Checker c(doc, "", out);
  c.enumeration<HintLevel>("hint_level");
  c.text("hint_text");
  c.text("encouragement", false);
  if (const Json* s = c.field("cognitive_strategy")) {
    if (!s->is_string() || (*s != "elimination_method" && !enum_parse<CognitiveStrategy>(s->get<std::string>()))) {
      c.enumeration<CognitiveStrategy>("cognitive_strategy");
    }
  }
  c.number("wait_before_next", 15, 30, false);
  return out;
}

std::vector<std::string> validate_emotion(const Json& doc) {
  std::vector<std::string> out;
  Checker c(doc, "", out);
  c.enumeration<EmotionState>("detected_emotion");
  c.number("confidence", 0, 100, true);
  c.text_list("emotion_indicators");
  c.enumeration<EmotionTrend>("emotion_trend");
  c.boolean("intervention_needed", false);
  const bool needed = !doc.contains("intervention_needed") || doc["intervention_needed"] == true;
  c.enumeration<InterventionType>("intervention_type", needed);
  c.text("intervention_content", false, false);
  c.text("emotional_support", false, false);
  c.enumeration<GameAdjustment>("suggested_action");
  return out;
}

std::vector<std::string> validate_cognition_report(const Json& doc) {
  std::vector<std::string> out;
  Checker c(doc, "", out);
  if (const Json* scores = c.object("cognitive_scores")) {
    if (scores->empty()) c.fail("cognitive_scores", "must score at least one domain");
    auto sc = c.nested("cognitive_scores", *scores);
    for (auto it = scores->begin(); it != scores->end(); ++it) {
      try {
        parse_domain(it.key());
      } catch (const Error&) {
        sc.fail(it.key(), "is not a cognitive domain");
        continue;
      }
      sc.number(it.key(), 0, 100, true);
    }
  }
  if (const Json* fb = c.object("friendly_feedback")) {
    for (auto it = fb->begin(); it != fb->end(); ++it) {
      if (!it->is_string()) c.nested("friendly_feedback", *fb).fail(it.key(), "must be a string");
    }
  }
  c.text_list("strengths");
  c.text_list("areas_for_improvement");
  c.text_list("recommendations");
  c.text("encouragement");
  c.text("progress_analysis", false, false);
  return out;
}

std::vector<std::string> validate_reme_answer(const Json& doc) {
  std::vector<std::string> out;
  Checker c(doc, "", out);
  c.text("thoughts", false);
  c.text("outputs");
  c.boolean("is_end");
  return out;
}

std::vector<std::string> validate_sim_action(const Json& doc) {
  std::vector<std::string> out;
  Checker c(doc, "", out);
  c.text("action");
  return out;
}

std::vector<std::string> validate_judge_domains(const Json& doc) {
  std::vector<std::string> out;
  Checker c(doc, "", out);
  if (const Json* list = c.array("detected_domains")) {
    for (const auto& d : *list) {
      if (!d.is_string()) {
        c.fail("detected_domains", "must contain domain names");
        continue;
      }
      try {
        parse_domain(d.get<std::string>());
      } catch (const Error&) {
        c.fail("detected_domains", "contains unknown domain '" + d.get<std::string>() + "'");
      }
    }
  }
  c.text("reasoning", false, false);
  return out;
}

std::vector<std::string> validate_judge_rubric(const Json& doc) {
  std::vector<std::string> out;
  Checker c(doc, "", out);
  scored(c, doc, "helpfulness", "score", 5);
  scored(c, doc, "difficulty", "cognitive_load_score", 5);
  for (const char* key : {"coherence", "personalization", "enjoyment", "willingness"}) scored(c, doc, key, "score", 5);
  if (const Json* safety = c.object("safety")) {
    auto sc = c.nested("safety", *safety);
    if (const Json* codes = sc.array("risk_behaviors")) {
      for (const auto& code : *codes) {
        if (!code.is_string() || !is_risk_behavior_code(code.get<std::string>())) {
          std::string allowed;
          for (auto k : kRiskBehaviorCodes) allowed += (allowed.empty() ? "" : "|") + std::string(k);
          sc.fail("risk_behaviors", "entries must be one of " + allowed);
          break;
        }
      }
    }
  }
  if (const Json* hints = c.object("hints")) {
    auto hc = c.nested("hints", *hints);
    hc.number("required", 0, 1e6, true);
    hc.number("provided", 0, 1e6, true);
  }
  if (const Json* anxiety = c.object("anxiety")) {
    auto ac = c.nested("anxiety", *anxiety);
    ac.number("instances", 0, 1e6, true);
    ac.number("alleviation_attempts", 0, 1e6, true);
    if (out.empty() && (*anxiety)["alleviation_attempts"].get<double>() > (*anxiety)["instances"].get<double>()) {
      ac.fail("alleviation_attempts", "cannot exceed instances");
    }
  }
  return out;
}

void register_builtin(SchemaRegistry& registry) {
  registry.add(std::string(kGameSpec), validate_game_spec);
  registry.add(std::string(kTurnOutput), validate_turn_output);
  registry.add(std::string(kCritique), validate_critique);
  registry.add(std::string(kHint), validate_hint);
  registry.add(std::string(kEmotion), validate_emotion);
  registry.add(std::string(kCognitionReport), validate_cognition_report);
  registry.add(std::string(kRemeAnswer), validate_reme_answer);
  registry.add(std::string(kSimAction), validate_sim_action);
  registry.add(std::string(kJudgeDomains), validate_judge_domains);
  registry.add(std::string(kJudgeRubric), validate_judge_rubric);
}

}  // namespace letgames::schema

namespace letgames {

std::shared_ptr<const SchemaRegistry> SchemaRegistry::builtin() {
  static const std::shared_ptr<const SchemaRegistry> registry = [] {
    auto r = std::make_shared<SchemaRegistry>();
    schema::register_builtin(*r);
    return r;
  }();
  return registry;
}

}  // namespace letgames
