// SPDX-License-Identifier: Apache-2.0
#include "letgames/reme.hpp"

#include <algorithm>
#include <fstream>
#include <random>

#include "agent_util.hpp"
#include "letgames/schemas.hpp"
#include "letgames/text.hpp"

namespace letgames {

RemeCandidates RemeCandidates::from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::parse_error, "candidates must be an object of category -> items");
  RemeCandidates c;
  for (const auto& [category, items] : j.items()) {
    if (!items.is_array()) throw Error(ErrorCode::parse_error, "category '" + category + "' must list items");
    std::vector<RemeItem> list;
    for (const auto& it : items) {
      RemeItem item;
      if (it.is_string()) {
        item.name = it.get<std::string>();
      } else if (it.is_object() && it.contains("name") && it["name"].is_string()) {
        item.name = it["name"].get<std::string>();
        item.synonyms = it.value("synonyms", std::vector<std::string>{});
        item.features = it.value("features", std::vector<std::string>{});
      } else {
        throw Error(ErrorCode::parse_error, "bad item in category '" + category + "'");
      }
      list.push_back(std::move(item));
    }
    c.categories.emplace_back(category, std::move(list));
  }
  return c;
}

RemeCandidates RemeCandidates::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot read " + path.string());
  std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json(parse_json(body));
}

std::size_t RemeCandidates::item_count() const {
  std::size_t n = 0;
  for (const auto& [_, items] : categories) n += items.size();
  return n;
}

const RemeItem* RemeCandidates::find(std::string_view category, std::string_view item) const {
  for (const auto& [c, items] : categories) {
    if (c != category) continue;
    for (const auto& i : items) {
      if (i.name == item) return &i;
    }
  }
  return nullptr;
}

int RemeGame::questions_answered() const {
  return static_cast<int>(std::count_if(history.begin(), history.end(), [](const RemeExchange& e) {
    return e.answer == "Yes" || e.answer == "No";
  }));
}

RemeGame reme_start(const RemeCandidates& candidates, std::uint64_t seed) {
  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i < candidates.categories.size(); ++i) {
    if (!candidates.categories[i].second.empty()) usable.push_back(i);
  }
  if (usable.empty()) throw Error(ErrorCode::empty_candidates, "no categories with items to choose from");
  std::mt19937_64 rng(seed);
  const auto& [category, items] =
      candidates.categories[usable[std::uniform_int_distribution<std::size_t>(0, usable.size() - 1)(rng)]];
  RemeGame g;
  g.category = category;
  g.target = items[std::uniform_int_distribution<std::size_t>(0, items.size() - 1)(rng)];
  return g;
}

bool is_hint_request(std::string_view input) {
  for (const char* w : {"hint", "hints", "help", "clue", "clues"}) {
    if (text::mentions_ci(input, w)) return true;
  }
  return false;
}

bool is_open_question(std::string_view input) {
  const auto w = text::words(input);
  if (w.empty()) return true;
  static const std::vector<std::string> openers{"what", "which", "who", "whose", "how", "where", "when", "why",
                                                "tell", "spell", "name", "describe", "give"};
  if (std::find(openers.begin(), openers.end(), w.front()) != openers.end()) return true;
  return text::contains_ci(input, "first letter") || text::contains_ci(input, "how many letters");
}

bool names_target(const RemeGame& game, std::string_view input) {
  if (text::mentions_ci(input, game.target.name)) return true;
  return std::any_of(game.target.synonyms.begin(), game.target.synonyms.end(),
                     [&](const std::string& s) { return text::mentions_ci(input, s); });
}

std::string reme_opening(const RemeGame& game) {
  return "Let's play a guessing game! I am thinking of something from the category \"" + game.category +
         "\". Ask me questions I can answer with yes or no, and try to find out what it is.";
}

namespace {

std::string mask_target(const RemeGame& g, std::string s) {
  s = text::redact_ci(s, g.target.name, "it");
  for (const auto& syn : g.target.synonyms) s = text::redact_ci(s, syn, "it");
  return s;
}

bool leaks_target(const RemeGame& g, std::string_view s) {
  if (text::contains_ci(s, g.target.name)) return true;
  return std::any_of(g.target.synonyms.begin(), g.target.synonyms.end(),
                     [&](const std::string& syn) { return text::contains_ci(s, syn); });
}

std::string summary_text(const RemeGame& g) {
  std::string out = "Here is what we know so far: it belongs to the category \"" + g.category + "\".";
  bool any = false;
  for (const auto& e : g.history) {
    if (e.answer != "Yes" && e.answer != "No") continue;
    out += " You asked \"" + e.question + "\" and the answer was " + text::to_lower(e.answer) + ".";
    any = true;
  }
  if (!any) out += " Try asking where it is usually found or what it is used for.";
  return mask_target(g, out);
}

}  // namespace

RemeEngine::RemeEngine(LlmGateway& gateway, ModelConfig config, int max_questions)
    : gateway_(gateway), config_(std::move(config)), max_questions_(max_questions) {}

std::pair<RemeGame, RemeReply> RemeEngine::answer(const RemeGame& game, std::string_view player_input) const {
  if (game.ended) throw Error(ErrorCode::game_ended, "the guessing game is already over");
  RemeGame next = game;
  RemeReply reply;
  const std::string question = text::trim(player_input);

  if (is_hint_request(question)) {
    reply.kind = RemeReplyKind::summary;
    reply.thoughts = "the player asked for help; summarise the established facts";
    reply.outputs = summary_text(game);
  } else if (names_target(game, question)) {
    reply.kind = RemeReplyKind::solved;
    reply.thoughts = "the player named the target";
    reply.outputs = "Congratulations, you got it! The answer is " + game.target.name + ". Well done!";
    reply.is_end = true;
    next.solved = true;
  } else if (is_open_question(question)) {
    reply.kind = RemeReplyKind::redirect;
    reply.thoughts = "not a yes/no question; redirect";
    reply.outputs = "I can only answer yes or no. Try a question like \"Is it something you use at home?\"";
  } else {
    Json history = Json::array();
    for (const auto& e : game.history) history.push_back({{"question", e.question}, {"answer", e.answer}});
    Json ctx{{"category", game.category},
             {"target", game.target.name},
             {"target_features", game.target.features},
             {"history", history},
             {"question", question}};
    auto req = detail::agent_request(prompts::kRemeController, schema::kRemeAnswer, std::move(ctx), config_);
    auto check = [&](const Json& doc) {
      std::vector<std::string> v;
      const auto w = text::words(doc.value("outputs", ""));
      if (w.empty() || (w.front() != "yes" && w.front() != "no")) v.push_back("outputs: must be \"Yes.\" or \"No.\"");
      if (leaks_target(game, doc.value("outputs", ""))) v.push_back("outputs: must not name the secret object");
      return v;
    };
    auto resp = gateway_.complete_structured(std::move(req), std::string(schema::kRemeAnswer), check);
    const Json& doc = *resp.parsed_document;
    reply.thoughts = doc.value("thoughts", "");
    reply.outputs = text::words(doc.value("outputs", "")).front() == "yes" ? "Yes" : "No";
    reply.kind = RemeReplyKind::answer;
  }

  next.history.push_back({question, reply.outputs});
  if (reply.kind == RemeReplyKind::answer && next.questions_answered() >= max_questions_) {
    reply.kind = RemeReplyKind::out_of_questions;
    reply.outputs += ". That was the last question. The answer was " + game.target.name + ". Thank you for playing!";
    reply.is_end = true;
  }
  next.ended = reply.is_end;
  return {std::move(next), std::move(reply)};
}

}  // namespace letgames
