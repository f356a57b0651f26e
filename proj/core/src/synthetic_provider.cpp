// SPDX-License-Identifier: Apache-2.0
#include "letgames/synthetic_provider.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "letgames/codec.hpp"
#include "letgames/patient_sim.hpp"
#include "letgames/schemas.hpp"
#include "letgames/text.hpp"

namespace letgames {
namespace {

std::string str(const Json& j, const char* key, const std::string& fallback = "") {
  if (!j.is_object()) return fallback;
  auto it = j.find(key);
  return it != j.end() && it->is_string() ? it->get<std::string>() : fallback;
}

int num(const Json& j, const char* key, int fallback) {
  if (!j.is_object()) return fallback;
  auto it = j.find(key);
  return it != j.end() && it->is_number() ? it->get<int>() : fallback;
}

const Json& child(const Json& j, const char* key) {
  static const Json kNull;
  if (!j.is_object()) return kNull;
  auto it = j.find(key);
  return it == j.end() ? kNull : *it;
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    std::string item = text::trim(cur);
    while (!item.empty() && (item.back() == '.' || item.back() == '!')) item.pop_back();
    if (!item.empty()) out.push_back(item);
    cur.clear();
  };
  const std::string v(s);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == ',' || v[i] == ';' || v[i] == '\n') {
      flush();
    } else if (v.compare(i, 5, " and ") == 0) {
      flush();
      i += 4;
    } else {
      cur.push_back(v[i]);
    }
  }
  flush();
  return out;
}

std::string join_list(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += i + 1 == items.size() ? " and " : ", ";
    out += items[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Designer

struct Scenario {
  const char* name;
  const char* location;
  const char* errand;
  std::vector<std::string> props;
  std::vector<std::string> items;
  std::vector<std::string> chores;  // retention fillers, free of list items
};

const std::vector<Scenario>& scenarios() {
  static const std::vector<Scenario> kScenarios{
      {"Saturday Market",
       "the town market",
       "shopping for a family lunch",
       {"shopping basket", "wooden crate"},
       {"apples", "bread", "milk", "eggs", "honey", "tomatoes", "cheese"},
       {"Carry the wooden crate to the stall", "Sweep the leaves off the path", "Hold the door for a neighbour",
        "Fold the empty sacks", "Admire the flower stall", "Help hang the striped banner",
        "Stack the empty baskets"}},
      {"Garden Party",
       "the community garden",
       "getting ready for a small garden party",
       {"picnic blanket", "watering can"},
       {"lemonade", "napkins", "cake", "candles", "paper cups", "grapes", "biscuits"},
       {"Water the roses by the gate", "Spread the picnic blanket on the lawn", "Pull a few weeds from the path",
        "Help move the bench into the shade", "Hang the paper lanterns", "Close the garden gate",
        "Chat about the spring weather"}},
      {"Library Morning",
       "the neighbourhood library",
       "picking up books for the reading club",
       {"tote bag", "library card"},
       {"cookbook", "atlas", "poetry book", "birdwatching guide", "crossword book", "travel diary",
        "history magazine"},
       {"Help tidy the returns trolley", "Straighten the chairs in the reading room", "Water the fern by the window",
        "Carry a box of donated magazines", "Open the blinds", "Wipe the study table", "Refill the leaflet rack"}},
  };
  return kScenarios;
}

const std::vector<std::string>& rhyme_words() {
  static const std::vector<std::string> kWords{"sunrise", "harbor", "violin", "meadow", "lantern", "river", "orchard"};
  return kWords;
}

const std::vector<std::string>& npc_pool() {
  static const std::vector<std::string> kNames{"Rosa",   "Henry", "Mei",   "Samuel",
                                               "Ingrid", "Tariq", "Lucia", "Walter"};
  return kNames;
}

struct PlainTask {
  const char* description;
  const char* action;
  const char* answer;
};

// Single-phase tasks per domain. `%` is replaced by the first NPC's name.
std::vector<PlainTask> plain_tasks(const std::string& domain) {
  if (domain == "attention") {
    return {{"Find the stall with the blue awning among the crowd", "Walk to the stall with the blue awning",
             "blue awning"},
            {"Spot the price tag on the honey jar", "Point at the price tag on the honey jar", "price tag"},
            {"Listen for % calling your name over the noise", "Turn toward % calling your name", "calling"}};
  }
  if (domain == "social_cognition") {
    return {{"% looks worried; find out why", "Ask % gently what is wrong", "gently"},
            {"Comfort % after hearing the news", "Offer % a cup of tea", "offer"},
            {"Thank % for the company", "Thank % warmly for the morning", "thank"}};
  }
  if (domain == "language") {
    return {{"Describe the fruit on the stall to %", "Describe the ripe red apples to %", "describe"},
            {"Name three things you can see around you", "Name the bread, the cheese and the flowers", "name"},
            {"Explain to % how you make a pot of tea", "Explain to % how to make a pot of tea", "explain"}};
  }
  return {{"Plan the route with %: bakery first, then the post office", "Go to the bakery first with %", "bakery"},
          {"Pay the baker with the exact change", "Count out the exact change for the baker", "exact change"},
          {"Collect the parcel before the post office closes", "Collect the parcel at the counter", "parcel"}};
}

std::string fill(std::string s, const std::string& name) {
  for (auto pos = s.find('%'); pos != std::string::npos; pos = s.find('%')) s.replace(pos, 1, name);
  return s;
}

Json design(const Json& ctx) {
  const std::string domain = str(ctx, "target_domain", "memory");
  const Json& profile = child(ctx, "profile");
  const Json& band = child(ctx, "band");
  const std::string player = str(profile, "name");
  const int level = num(ctx, "difficulty_level", 3);
  const std::uint64_t seed = stable_hash({player, domain, std::to_string(level), str(band, "band")});
  const Scenario& sc = scenarios()[seed % scenarios().size()];
  const int npc_n = std::max(1, num(child(band, "npc_count"), "min", 2));
  const int items_n = std::max(1, num(child(band, "memory_items"), "min", 3));
  const int rounds = std::max(1, num(child(band, "retention_rounds"), "min", 3));

  std::vector<std::string> names;
  const auto& pool = npc_pool();
  for (std::size_t i = 0; i < pool.size() && static_cast<int>(names.size()) < npc_n; ++i) {
    const std::string& n = pool[(seed / 7 + i) % pool.size()];
    if (!text::mentions_ci(player, n)) names.push_back(n);
  }
  static const char* kRelations[] = {"neighbour", "old friend", "shopkeeper", "niece"};
  Json npcs = Json::array();
  for (std::size_t i = 0; i < names.size(); ++i) {
    npcs.push_back({{"name", names[i]},
                    {"age", i == 0 ? "in their sixties" : "in their thirties"},
                    {"relationship", kRelations[i % 4]},
                    {"personality", {"warm", "patient"}},
                    {"appearance", "a friendly face with a ready smile"},
                    {"speech_style", "calm and friendly"},
                    {"background_story", names[i] + " has lived nearby for many years."},
                    {"potential_dialogues", {"Lovely to see you!"}}});
  }
  const std::string npc1 = names.front();
  const std::string npc2 = names.size() > 1 ? names[1] : names.front();

  Json items = Json::array();
  for (const auto& p : sc.props) {
    items.push_back({{"item_name", p},
                     {"description", "a " + p},
                     {"significance", "used during the errand"},
                     {"cognitive_relevance", "a concrete anchor in the scene"}});
  }

  const bool verbal = domain == "verbal_learning";
  const bool three_phase = domain == "memory" || verbal;
  Json subs = Json::array();
  if (three_phase) {
    const auto& pool_items = verbal ? rhyme_words() : sc.items;
    std::vector<std::string> list;
    for (int i = 0; i < items_n; ++i) list.push_back(pool_items[(seed / 13 + static_cast<std::uint64_t>(i)) % pool_items.size()]);
    Json chores = Json::array();
    for (int i = 0; i < rounds; ++i) chores.push_back(sc.chores[static_cast<std::size_t>(i) % sc.chores.size()]);
    subs.push_back({{"task_id", "t1"},
                    {"description", verbal ? "Listen to " + npc1 + "'s little rhyme and learn its key words"
                                           : "Listen to " + npc1 + "'s request and take in the list"},
                    {"cognitive_function", domain},
                    {"difficulty", level},
                    {"steps", {"Greet " + npc1, "Listen to the list"}},
                    {"phase", "encoding"},
                    {"npc_trigger", npc1},
                    {"npc_dialogue", verbal ? "Here is a little rhyme I love. These are its key words."
                                            : "Could you help me gather a few things?"},
                    {"expected_recall", nullptr}});
    subs.push_back({{"task_id", "t2"},
                    {"description", "Help " + npc2 + " with a small job at " + sc.location},
                    {"cognitive_function", domain},
                    {"difficulty", level},
                    {"steps", chores},
                    {"phase", "retention"},
                    {"npc_trigger", npc2},
                    {"npc_dialogue", "Would you give me a hand for a minute?"},
                    {"expected_recall", nullptr}});
    subs.push_back({{"task_id", "t3"},
                    {"description", verbal ? "Say the key words of the rhyme back to " + npc1
                                           : "Tell " + npc1 + " which things were on the list"},
                    {"cognitive_function", domain},
                    {"difficulty", level},
                    {"steps", {"Answer " + npc1}},
                    {"phase", "retrieval"},
                    {"npc_trigger", npc1},
                    {"npc_dialogue", verbal ? "Which words were in my rhyme?" : "Now, which things did I ask you for?"},
                    {"expected_recall", join_list(list)}});
  } else {
    int i = 1;
    for (const auto& t : plain_tasks(domain)) {
      subs.push_back({{"task_id", "t" + std::to_string(i++)},
                      {"description", fill(t.description, npc1)},
                      {"cognitive_function", domain},
                      {"difficulty", level},
                      {"steps", {fill(t.action, npc1)}},
                      {"phase", "none"},
                      {"npc_trigger", npc1},
                      {"npc_dialogue", nullptr},
                      {"expected_recall", t.answer}});
    }
  }

  const std::string occupation = str(profile, "occupation", "retiree");
  return Json{{"scenario_name", sc.name},
              {"scenario_type", "daily_life"},
              {"setting",
               {{"location", sc.location},
                {"time_of_day", "morning"},
                {"weather", "mild and sunny"},
                {"season", "spring"},
                {"atmosphere", "relaxed and friendly"}}},
              {"story_background", "A calm morning at " + std::string(sc.location) + ", " + sc.errand +
                                       ". Your years as a " + occupation + " come in handy today."},
              {"npcs", npcs},
              {"items", items},
              {"main_task",
               {{"description", "Help out with " + std::string(sc.errand)},
                {"goal", "Finish every part of the errand"},
                {"motivation", "A pleasant morning with familiar faces"}}},
              {"sub_tasks", subs},
              {"success_criteria", "Every part of the errand is done."},
              {"difficulty_level", level},
              {"cognitive_challenges", {{"memory_load", items_n}, {"retention_rounds", rounds}}}};
}

// ---------------------------------------------------------------------------
// Controller

struct Draft {
  std::string narrative;
  std::optional<std::string> dialogue;
  std::optional<std::string> guidance;
  std::optional<std::string> encouragement;
  std::vector<std::pair<std::string, std::string>> suggestions;  // action, type
  bool question = false;
  bool success = true;
  std::string goal;
  Json task_update = nullptr;
};

std::vector<std::string> list_for(const std::vector<Json>& subs, std::size_t from) {
  for (std::size_t i = from; i < subs.size(); ++i) {
    if (str(subs[i], "phase") == "retrieval") return split_list(str(subs[i], "expected_recall"));
  }
  return {};
}

std::string npc_of(const Json& task, const std::vector<std::string>& declared) {
  const std::string t = str(task, "npc_trigger");
  if (!t.empty()) return t;
  return declared.empty() ? std::string("your companion") : declared.front();
}

void present(Draft& d, const std::vector<Json>& subs, std::size_t idx, int progress,
             const std::vector<std::string>& declared, const std::string& location) {
  const Json& task = subs[idx];
  const std::string phase = str(task, "phase", "none");
  const std::string npc = npc_of(task, declared);
  const std::string desc = str(task, "description");
  d.goal = desc;
  if (phase == "encoding") {
    d.narrative += "\n" + npc + " comes over and says: \"" + str(task, "npc_dialogue", "Here is what I need.") + "\"";
    for (const auto& item : list_for(subs, idx)) d.narrative += "\n- " + item;
    d.suggestions = {{"Nod and thank " + npc, "primary"}, {"Look around " + location, "exploratory"}};
  } else if (phase == "retention") {
    const Json& steps = child(task, "steps");
    const std::size_t n = steps.is_array() && !steps.empty() ? steps.size() : 1;
    const std::size_t k = std::min(n - 1, static_cast<std::size_t>(progress) * n / 100);
    const std::string step = steps.is_array() && !steps.empty() ? steps[k].get<std::string>() : desc;
    d.narrative += progress == 0 ? "\n" + npc + " waves you over. " + desc + "."
                                 : "\n" + npc + " points to the next job: " + text::to_lower(step.substr(0, 1)) +
                                       step.substr(1) + ".";
    d.suggestions = {{step, "primary"}, {"Take a short stroll around " + location, "exploratory"}};
  } else if (phase == "retrieval") {
    d.narrative += "\n" + npc + " turns to you with a smile.";
    d.dialogue = str(task, "npc_dialogue", "What was on the list?");
    d.question = true;
    d.suggestions.clear();
  } else {
    const Json& steps = child(task, "steps");
    d.narrative += "\n" + desc + ".";
    const std::string act = steps.is_array() && !steps.empty() ? steps[0].get<std::string>() : desc;
    d.suggestions = {{act, "primary"}, {"Wander over to look at something else", "exploratory"}};
  }
}

struct Verdict {
  bool success = false;
  std::string status = "in_progress";
  int progress = 0;
};

Verdict judge_action(const Json& task, const std::string& action, int progress) {
  Verdict v;
  v.progress = progress;
  for (const char* w : {"fly", "magic", "teleport"}) {
    if (text::mentions_ci(action, w)) return v;
  }
  const std::string phase = str(task, "phase", "none");
  if (phase == "encoding") {
    v = {true, "completed", 100};
  } else if (phase == "retention") {
    const Json& steps = child(task, "steps");
    const int n = steps.is_array() && !steps.empty() ? static_cast<int>(steps.size()) : 1;
    v.success = true;
    v.progress = std::min(100, progress + (100 + n - 1) / n);
    v.status = v.progress >= 100 ? "completed" : "in_progress";
  } else if (phase == "retrieval") {
    const auto items = split_list(str(task, "expected_recall"));
    const auto hits = std::count_if(items.begin(), items.end(),
                                    [&](const std::string& i) { return text::mentions_ci(action, i); });
    if (hits == static_cast<long>(items.size())) {
      v = {true, "completed", 100};
    } else {
      v.progress = std::max(progress, static_cast<int>(hits * 100 / static_cast<long>(items.size())));
    }
  } else {
    for (const auto& w : text::words(str(task, "expected_recall"))) {
      if (w.size() >= 3 && text::mentions_ci(action, w)) v = {true, "completed", 100};
    }
  }
  return v;
}

Json control(const Json& ctx) {
  const Json& spec = child(ctx, "spec");
  const Json& st = child(ctx, "state");
  const bool opening = ctx.value("is_opening", false);
  const std::string action = str(ctx, "action");
  std::vector<Json> subs;
  if (child(spec, "sub_tasks").is_array()) subs = child(spec, "sub_tasks").get<std::vector<Json>>();
  std::vector<std::string> declared;
  if (child(spec, "npcs").is_array()) {
    for (const auto& n : spec["npcs"]) declared.push_back(str(n, "name"));
  }
  const std::string location = str(child(spec, "setting"), "location", "the neighbourhood");
  std::map<std::string, std::pair<std::string, int>> status;
  if (child(st, "sub_task_status").is_array()) {
    for (const auto& s : st["sub_task_status"]) status[str(s, "task_id")] = {str(s, "status"), num(s, "progress", 0)};
  }
  const std::string active_id = str(st, "active_sub_task_id");
  std::optional<std::size_t> idx;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (str(subs[i], "task_id") == active_id) idx = i;
  }

  Draft d;
  if (opening) {
    d.narrative = "Welcome! You are at " + location + ". " + str(child(spec, "main_task"), "description", "") + ".";
    if (idx) present(d, subs, *idx, status[active_id].second, declared, location);
  } else if (!idx) {
    d.narrative = "Everything is already finished. Thank you for playing!";
    d.goal = "All done";
  } else {
    const Json& task = subs[*idx];
    const int before = status[active_id].second;
    const Verdict v = judge_action(task, action, before);
    d.success = v.success;
    d.task_update = Json{{"task_id", active_id}, {"status", v.status}, {"progress", v.progress}};
    if (v.success && v.status == "completed") {
      d.encouragement = "Well done!";
      d.narrative = "Well done, that is exactly right.";
      std::optional<std::size_t> next;
      for (std::size_t k = 1; k <= subs.size() && !next; ++k) {
        const std::size_t j = (*idx + k) % subs.size();
        if (j != *idx && status[str(subs[j], "task_id")].first != "completed") next = j;
      }
      if (next) {
        present(d, subs, *next, status[str(subs[*next], "task_id")].second, declared, location);
      } else {
        d.narrative += " Wonderful, you have finished everything! " + str(spec, "success_criteria");
        d.goal = "All done";
      }
    } else if (v.success) {
      d.encouragement = "Thank you, that helps a lot.";
      d.narrative = "Thank you, that helps a lot.";
      present(d, subs, *idx, v.progress, declared, location);
    } else {
      d.guidance = "That's alright. Let's take it one step at a time.";
      static const char* kRetry[] = {"Let's give that another go together.", "No hurry, we can try once more.",
                                     "That's alright, have another go when you're ready."};
      d.narrative = kRetry[static_cast<std::size_t>(num(st, "turn_index", 0)) % 3];
      present(d, subs, *idx, v.progress, declared, location);
    }
  }

  Json actions = Json::array();
  if (!d.question) {
    int n = 1;
    for (const auto& [a, type] : d.suggestions) {
      actions.push_back({{"action", a}, {"action_id", "a" + std::to_string(n++)}, {"type", type}});
    }
  }
  std::string body = d.narrative + "\n" + d.dialogue.value_or("");
  for (const auto& a : actions) body += "\n" + a["action"].get<std::string>();
  Json present_npcs = Json::array();
  for (const auto& n : declared) {
    if (!n.empty() && text::mentions(body, n)) present_npcs.push_back(n);
  }
  return Json{{"narrative", text::trim(d.narrative)},
              {"current_situation", "At " + location},
              {"current_goal", d.goal},
              {"suggested_actions", actions},
              {"npc_dialogue", d.dialogue ? Json(*d.dialogue) : Json(nullptr)},
              {"is_action_successful", d.success},
              {"success_encouragement", d.encouragement ? Json(*d.encouragement) : Json(nullptr)},
              {"gentle_guidance", d.guidance ? Json(*d.guidance) : Json(nullptr)},
              {"is_question_moment", d.question},
              {"world_state_update", {{"current_scene", location}, {"npcs_present", present_npcs}}},
              {"task_update", d.task_update}};
}

// ---------------------------------------------------------------------------
// Critic, Psychology Master and tracker

Json critique(const Json& ctx) {
  const std::size_t n = child(ctx, "prior_suggestions").is_array() ? ctx["prior_suggestions"].size() : 0;
  return Json{{"approved", true},
              {"safety_score", 95},
              {"consistency_score", 90},
              {"cultural_fit_score", 90},
              {"issues", Json::array()},
              {"suggestions", Json::array()},
              {"addressed", std::vector<bool>(n, true)}};
}

Json hint(const Json& ctx) {
  const std::string level = str(ctx, "hint_level", "L1");
  const Json& sub = child(ctx, "sub_task");
  const Json& active = child(sub, "active_sub_task");
  const auto items = split_list(str(active, "expected_recall"));
  const bool listed = str(active, "phase") == "retrieval" && !items.empty();
  std::string text;
  std::string strategy;
  if (level == "L1") {
    strategy = "association";
    text = "Picture the start of this part of the game. Who was there, and what were they talking about?";
  } else if (level == "L2") {
    strategy = "elimination";
    text = listed ? "There were " + std::to_string(items.size()) + " things, and one of them starts with the letter '" +
                        items.front().substr(0, 1) + "'."
                  : "Set aside the choices that do not move the errand forward; one of them fits the goal.";
  } else {
    strategy = "direct_guidance";
    const Json& steps = child(active, "steps");
    if (listed) {
      text = "You can answer: \"" + join_list(items) + "\"";
    } else if (steps.is_array() && !steps.empty()) {
      text = "Try typing: \"" + steps[0].get<std::string>() + "\"";
    } else {
      text = "Try typing: \"" + str(sub, "current_goal", "Look around") + "\"";
    }
  }
  return Json{{"hint_level", level},
              {"hint_text", text},
              {"encouragement", "You're doing well, take your time."},
              {"cognitive_strategy", strategy},
              {"wait_before_next", 20}};
}

Json emotion(const Json& ctx) {
  const Json& f = child(ctx, "features");
  const int cf = num(f, "consecutive_failures", 0);
  const double latency = child(f, "behavior").value("response_latency_seconds", 0.0);
  const double rate = child(f, "performance").value("success_rate", 1.0);
  const double recent = child(f, "performance").value("recent_success_rate", 1.0);
  std::string state = "calm";
  std::string intervention = "none";
  std::string adjust = "no_change";
  std::string trend = "stable";
  std::string content;
  std::vector<std::string> indicators;
  if (cf >= 3) {
    state = "frustrated";
    intervention = "intensive";
    adjust = "reduce_difficulty";
    trend = "declining";
    content = "Let's take a breath together. This part is tricky, and it is fine to slow down.";
    indicators.push_back("several attempts without success");
  } else if (cf == 2) {
    state = "confused";
    intervention = "supportive";
    adjust = "provide_hint";
    content = "You are doing fine. Take all the time you need.";
    indicators.push_back("two attempts without success");
  } else if (latency > 30.0) {
    state = "mild_anxiety";
    intervention = "preventive";
    content = "There is no hurry at all.";
    indicators.push_back("long pause before answering");
  } else if (rate >= 0.5 && recent >= rate) {
    state = "engaged";
    trend = recent > rate ? "improving" : "stable";
    indicators.push_back("steady progress");
  } else {
    indicators.push_back("no strong signals");
  }
  return Json{{"detected_emotion", state},
              {"confidence", 70},
              {"emotion_indicators", indicators},
              {"emotion_trend", trend},
              {"intervention_needed", intervention != "none"},
              {"intervention_type", intervention},
              {"intervention_content", content},
              {"emotional_support", "You are doing well."},
              {"suggested_action", adjust}};
}

Json cognition(const Json& ctx) {
  const std::string target = str(ctx, "target_domain", "memory");
  int n = 0;
  int ok = 0;
  if (child(ctx, "turns").is_array()) {
    for (const auto& t : ctx["turns"]) {
      ++n;
      if (t.value("is_action_successful", false)) ++ok;
    }
  }
  const double rate = n == 0 ? 0.0 : static_cast<double>(ok) / n;
  const int score = static_cast<int>(std::lround(40.0 + 60.0 * rate));
  const bool earlier = child(ctx, "previous_reports").is_array() && !ctx["previous_reports"].empty();
  return Json{{"cognitive_scores", {{target, score}}},
              {"friendly_feedback",
               {{target, "You completed " + std::to_string(ok) + " out of " + std::to_string(n) + " steps today."}}},
              {"strengths", {"Kept going through every part of the game"}},
              {"areas_for_improvement", {"Taking a little more time on the question moments"}},
              {"recommendations", {"Play again in a couple of days"}},
              {"encouragement", "Lovely work today!"},
              {"progress_analysis", earlier ? "Compared with earlier sessions, the pattern is holding steady."
                                            : "This is the first session on record."}};
}

// ---------------------------------------------------------------------------
// ReMe answers

Json reme_answer(const Json& ctx) {
  static const std::set<std::string> kStop{"is",  "it",    "a",    "an",   "the",  "does", "do",   "can",
                                           "you", "used",  "use",  "for",  "of",   "in",   "on",   "to",
                                           "something", "thing", "have", "has", "be", "are", "with", "your",
                                           "my",  "at",    "or",   "and",  "made", "by",   "usually", "found"};
  std::set<std::string> known;
  auto add_words = [&](const std::string& s) {
    for (auto w : text::words(s)) {
      if (w.size() > 3 && w.back() == 's') w.pop_back();
      known.insert(w);
    }
  };
  if (child(ctx, "target_features").is_array()) {
    for (const auto& f : ctx["target_features"]) add_words(f.get<std::string>());
  }
  add_words(str(ctx, "category"));
  bool yes = false;
  for (auto w : text::words(str(ctx, "question"))) {
    if (kStop.count(w)) continue;
    if (w.size() > 3 && w.back() == 's') w.pop_back();
    if (known.count(w)) yes = true;
  }
  return Json{{"thoughts", yes ? "the question matches a feature of the object" : "no feature of the object matches"},
              {"outputs", yes ? "Yes." : "No."},
              {"is_end", false}};
}

// ---------------------------------------------------------------------------
// Simulated player

std::vector<std::string> listed_items(const std::vector<std::string>& texts) {
  std::vector<std::string> latest;
  for (const auto& t : texts) {
    std::vector<std::string> found;
    bool choices = false;
    std::size_t start = 0;
    while (start <= t.size()) {
      const auto end = t.find('\n', start);
      const std::string line = text::trim(t.substr(start, end == std::string::npos ? std::string::npos : end - start));
      if (!line.empty() && line.back() == ':') {
        choices = line == "You could:";
      } else if (line.rfind("- ", 0) == 0) {
        if (!choices) found.push_back(text::trim(line.substr(2)));
      } else {
        choices = false;
      }
      if (end == std::string::npos) break;
      start = end + 1;
    }
    if (!found.empty()) latest = found;
  }
  return latest;
}

std::vector<std::string> choices_in(const std::string& t) {
  std::vector<std::string> out;
  const auto pos = t.find("You could:");
  if (pos == std::string::npos) return out;
  std::size_t start = pos;
  while ((start = t.find("\n- ", start)) != std::string::npos) {
    start += 3;
    const auto end = t.find('\n', start);
    out.push_back(text::trim(t.substr(start, end == std::string::npos ? std::string::npos : end - start)));
  }
  return out;
}

std::string first_person(std::string s) {
  s = text::trim(s);
  while (!s.empty() && (s.back() == '.' || s.back() == '!')) s.pop_back();
  if (s.empty()) return "I look around.";
  if (s.rfind("I ", 0) == 0) return s + ".";
  s[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
  return "I " + s + ".";
}

double memory_keep(const Json& persona) {
  if (str(persona, "condition") != "impaired") return 1.0;
  const std::string domain = str(persona, "domain");
  const std::string severity = str(persona, "severity", "moderate");
  if (domain != "memory" && domain != "verbal_learning") return 0.9;
  if (severity == "mild") return 0.8;
  if (severity == "severe") return 0.25;
  return 0.5;
}

double explore_chance(const Json& persona) {
  if (str(persona, "condition") != "impaired") return 0.0;
  const std::string severity = str(persona, "severity", "moderate");
  if (severity == "mild") return 0.1;
  if (severity == "severe") return 0.4;
  return 0.25;
}

Json sim_action(const Json& ctx) {
  static const std::vector<std::string> kQuestions{
      "Is it something you use at home?", "Is it bigger than a loaf of bread?", "Is it used outdoors?",
      "Is it made of metal?",             "Does it have wheels?",               "Is it something you eat?",
      "Is it soft?",                      "Does it need electricity?",          "Is it something you wear?",
      "Is it used in the kitchen?",       "Is it an animal?",                   "Can you hold it in one hand?",
      "Is it a bicycle?",                 "Is it an apple?",                    "Is it a chair?",
      "Is it a dog?",                     "Is it a kettle?",                    "Is it a piano?"};
  const Json& persona = child(ctx, "persona");
  const std::string game = str(ctx, "game_output");
  const bool question = ctx.value("is_question_moment", false);
  std::uint64_t seed = 0;
  try {
    seed = std::stoull(str(ctx, "turn_seed", "0"));
  } catch (const std::exception&) {
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::string> texts;
  if (child(ctx, "history").is_array()) {
    for (const auto& h : ctx["history"]) texts.push_back(str(h, "game"));
  }
  texts.push_back(game);

  if (text::contains_ci(game, "yes or no")) {
    const std::size_t n = texts.size() - 1;
    if (str(persona, "condition") == "impaired" && n % 7 == 6) return Json{{"action", "Could I have a hint, please?"}};
    return Json{{"action", kQuestions[n % kQuestions.size()]}};
  }

  if (const auto at = game.rfind("Hint:"); at != std::string::npos) {
    const auto q1 = game.find('"', at);
    const auto q2 = q1 == std::string::npos ? q1 : game.find('"', q1 + 1);
    if (q2 != std::string::npos) {
      std::string quoted = game.substr(q1 + 1, q2 - q1 - 1);
      if (memory_keep(persona) < 0.3 && unit(rng) < 0.5) {
        const auto parts = split_list(quoted);
        if (parts.size() > 1) quoted = parts.front();
      }
      return Json{{"action", question ? "I think it was " + quoted + "." : first_person(quoted)}};
    }
  }

  if (question) {
    auto items = listed_items(texts);
    if (items.empty()) return Json{{"action", "I'm not sure. Could you say that once more?"}};
    const double keep = memory_keep(persona);
    const auto k = static_cast<std::size_t>(std::lround(static_cast<double>(items.size()) * keep));
    std::vector<std::size_t> order(items.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    order.resize(std::min(k, order.size()));
    std::sort(order.begin(), order.end());
    if (order.empty()) return Json{{"action", "I'm not sure, I can't quite bring it to mind."}};
    std::vector<std::string> said;
    for (auto i : order) said.push_back(items[i]);
    return Json{{"action", "I think it was " + join_list(said) + "."}};
  }

  const auto choices = choices_in(game);
  if (choices.empty()) return Json{{"action", "I look around."}};
  std::size_t pick = 0;
  if (choices.size() > 1 && unit(rng) < explore_chance(persona)) pick = 1;
  return Json{{"action", first_person(choices[pick])}};
}

// ---------------------------------------------------------------------------
// Judge

Json judge_domains(const Json& ctx) {
  const Json& session = child(ctx, "session");
  const Json& scenario = child(session, "scenario");
  if (scenario.is_null()) {
    return Json{{"detected_domains", {"executive_function"}},
                {"reasoning", "The player narrowed down a hidden object by planning a sequence of questions."}};
  }
  std::set<std::string> phases;
  std::string all;
  if (child(scenario, "sub_tasks").is_array()) {
    for (const auto& t : scenario["sub_tasks"]) {
      phases.insert(str(t, "phase"));
      all += " " + text::to_lower(str(t, "description"));
    }
  }
  std::vector<std::string> found;
  if (phases.count("encoding") && phases.count("retention") && phases.count("retrieval")) {
    found.push_back(all.find("rhyme") != std::string::npos ? "verbal_learning" : "memory");
  } else {
    const std::vector<std::pair<std::string, std::vector<std::string>>> cues{
        {"attention", {"spot", "find the", "listen for", "notice"}},
        {"executive_function", {"plan", "route", "exact change"}},
        {"social_cognition", {"worried", "comfort", "feel"}},
        {"language", {"describe", "name three", "explain"}}};
    for (const auto& [domain, words] : cues) {
      if (std::any_of(words.begin(), words.end(), [&](const std::string& w) { return all.find(w) != std::string::npos; })) {
        found.push_back(domain);
      }
    }
    if (found.empty()) found.push_back("executive_function");
  }
  return Json{{"detected_domains", found}, {"reasoning", "Inferred from what the sub-tasks asked the player to do."}};
}

Json judge_rubric(const Json& ctx) {
  static const std::vector<std::string> kHarsh{"you forgot", "this is simple", "you made a mistake",
                                               "you need to rest"};
  static const std::vector<std::string> kWorry{"not sure", "sorry", "don't know", "confused", "difficult", "can't"};
  const Json& session = child(ctx, "session");
  const Json& scenario = child(session, "scenario");
  const bool game = !scenario.is_null();
  int n = 0;
  int fails = 0;
  int hinted = 0;
  int worry = 0;
  int eased = 0;
  bool harsh = false;
  int repeat_run = 1;
  bool repetitive = false;
  std::string prev;
  if (child(session, "turns").is_array()) {
    for (const auto& t : session["turns"]) {
      ++n;
      const bool ok = t.value("is_action_successful", true);
      if (!ok) ++fails;
      const bool has_hint = !child(t, "hint").is_null();
      const bool has_support = !child(t, "support").is_null();
      if (has_hint) ++hinted;
      std::string said = str(t, "game");
      if (has_hint) said += " " + str(t["hint"], "text");
      if (has_support) said += " " + t["support"].get<std::string>();
      for (const auto& h : kHarsh) harsh = harsh || text::contains_ci(said, h);
      const std::string g = str(t, "game");
      repeat_run = (!prev.empty() && g == prev) ? repeat_run + 1 : 1;
      repetitive = repetitive || repeat_run >= 3;
      prev = g;
      const std::string player = str(t, "player");
      if (std::any_of(kWorry.begin(), kWorry.end(), [&](const std::string& w) { return text::contains_ci(player, w); })) {
        ++worry;
        if (has_hint || has_support) ++eased;
      }
    }
  }
  Json risks = Json::array();
  if (harsh) risks.push_back("CRITICIZING");
  if (repetitive) risks.push_back("REPETITIVE");
  const int easiness = std::clamp(5 - static_cast<int>(std::lround(4.0 * fails / std::max(1, n))), 1, 5);
  const std::string occupation = text::to_lower(str(child(session, "player"), "occupation"));
  const bool personal = game && !occupation.empty() &&
                        text::contains_ci(str(scenario, "story_background"), occupation);
  const int enjoy = n > 0 && fails * 2 <= n ? 4 : 3;
  auto scored = [](int s, const std::string& why) { return Json{{"score", s}, {"reasoning", why}}; };
  return Json{
      {"helpfulness", scored(game ? 4 : 2, game ? "The target skill is practised in a structured sequence."
                                               : "The skill appears only indirectly.")},
      {"difficulty", {{"cognitive_load_score", easiness}, {"reasoning", "Based on how often the player got stuck."}}},
      {"coherence", scored(game ? 4 : 3, "The story and the world state stay consistent.")},
      {"personalization", scored(personal ? 4 : (game ? 3 : 2), "Compared the scenario with the player's background.")},
      {"enjoyment", scored(enjoy, "Estimated from the flow of successes.")},
      {"willingness", scored(enjoy, "Estimated from the flow of successes.")},
      {"safety", {{"risk_behaviors", risks}, {"reasoning", "Scanned the game's replies for harmful conduct."}}},
      {"hints", {{"required", fails}, {"provided", std::min(fails, hinted)}, {"reasoning", "Unsuccessful turns."}}},
      {"anxiety", {{"instances", worry}, {"alleviation_attempts", eased}, {"reasoning", "Worried phrasing."}}}};
}

}  // namespace

Json SyntheticProvider::respond(const std::string& schema_id, const Json& context) {
  if (schema_id == schema::kGameSpec) return design(context);
  if (schema_id == schema::kTurnOutput) return control(context);
  if (schema_id == schema::kCritique) return critique(context);
  if (schema_id == schema::kHint) return hint(context);
  if (schema_id == schema::kEmotion) return emotion(context);
  if (schema_id == schema::kCognitionReport) return cognition(context);
  if (schema_id == schema::kRemeAnswer) return reme_answer(context);
  if (schema_id == schema::kSimAction) return sim_action(context);
  if (schema_id == schema::kJudgeDomains) return judge_domains(context);
  if (schema_id == schema::kJudgeRubric) return judge_rubric(context);
  throw Error(ErrorCode::unknown_schema, "synthetic provider has no answer for '" + schema_id + "'");
}

ChatResponse SyntheticProvider::complete(const ChatRequest& request) {
  if (request.messages.empty()) throw Error(ErrorCode::invalid_argument, "request has no messages");
  const Json ctx = parse_json(request.messages.front().text);
  const std::string task = request.schema_id.empty() ? str(ctx, "task") : request.schema_id;
  ChatResponse resp;
  resp.text = respond(task, ctx).dump();
  resp.usage.prompt_tokens = static_cast<int>(request.system.size() / 4 + request.messages.front().text.size() / 4);
  resp.usage.completion_tokens = static_cast<int>(resp.text.size() / 4);
  return resp;
}

}  // namespace letgames
