// SPDX-License-Identifier: Apache-2.0
#include "letgames/scales.hpp"

#include <fstream>
#include <numeric>

#include "letgames/codec.hpp"
#include "letgames/text.hpp"

namespace letgames {

int ScaleItem::max_points() const {
  return credit_table.empty() ? static_cast<int>(slots.size()) : credit_table.back();
}

int ScaleItem::score(std::string_view answer) const {
  int earned = 0;
  for (const auto& accepted : slots) {
    for (const auto& phrase : accepted) {
      if (text::mentions_ci(answer, phrase)) {
        ++earned;
        break;
      }
    }
  }
  if (credit_table.empty()) return earned;
  return credit_table[static_cast<std::size_t>(earned)];
}

ScaleBank ScaleBank::from_json(const Json& j) {
  ScaleBank b;
  try {
    b.kind = enum_require<ScaleKind>(j.at("scale").get<std::string>(), "scale");
    b.preamble = j.value("preamble", "");
    b.max_score = j.at("max_score").get<int>();
    b.healthy_threshold = j.value("healthy_threshold", letgames::healthy_threshold(b.kind));
    for (const auto& it : j.at("items")) {
      ScaleItem item;
      item.id = it.at("id").get<std::string>();
      item.prompt = it.at("prompt").get<std::string>();
      item.slots = it.at("slots").get<std::vector<std::vector<std::string>>>();
      item.credit_table = it.value("credit_table", std::vector<int>{});
      if (!item.credit_table.empty() && item.credit_table.size() != item.slots.size() + 1) {
        throw Error(ErrorCode::parse_error, "item " + item.id + ": credit_table needs one entry per possible slot count");
      }
      b.items.push_back(std::move(item));
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("scale bank: ") + e.what());
  }
  const int total = std::accumulate(b.items.begin(), b.items.end(), 0,
                                    [](int acc, const ScaleItem& i) { return acc + i.max_points(); });
  if (total != b.max_score) {
    throw Error(ErrorCode::parse_error, "scale items add up to " + std::to_string(total) + ", expected " +
                                            std::to_string(b.max_score));
  }
  return b;
}

ScaleBank ScaleBank::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot read " + path.string());
  std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json(parse_json(body));
}

Json encode_scale_result(const ScaleResult& r) {
  return Json{{"scale", std::string(enum_name(r.scale))},
              {"score", r.score},
              {"max", r.max},
              {"passes_healthy_threshold", r.passes_healthy_threshold},
              {"item_scores", r.item_scores},
              {"answers", r.answers}};
}

int healthy_threshold(ScaleKind kind) {
  return kind == ScaleKind::mmse ? kMmseHealthyThreshold : kMocaBlindHealthyThreshold;
}

int scale_max(ScaleKind kind) { return kind == ScaleKind::mmse ? kMmseMax : kMocaBlindMax; }

bool passes_threshold(ScaleKind kind, double score) { return score >= healthy_threshold(kind); }

ScaleResult score_answers(const ScaleBank& bank, const std::vector<std::string>& answers) {
  if (answers.size() != bank.items.size()) {
    throw Error(ErrorCode::invalid_argument, "expected " + std::to_string(bank.items.size()) + " answers, got " +
                                                 std::to_string(answers.size()));
  }
  ScaleResult r;
  r.scale = bank.kind;
  r.max = bank.max_score;
  r.answers = answers;
  for (std::size_t i = 0; i < answers.size(); ++i) {
    r.item_scores.push_back(bank.items[i].score(answers[i]));
    r.score += r.item_scores.back();
  }
  r.passes_healthy_threshold = r.score >= bank.healthy_threshold;
  return r;
}

ScaleResult administer_scale(const PatientProfile& profile, const ScaleBank& bank, const PatientSimulator& simulator) {
  std::vector<SimExchange> history;
  if (!bank.preamble.empty()) history.push_back({bank.preamble, "All right."});
  std::vector<std::string> answers;
  for (const auto& item : bank.items) {
    auto turn = simulator.simulate_turn(profile, item.prompt, history, true);
    history.push_back({item.prompt, turn.action});
    answers.push_back(turn.action);
  }
  return score_answers(bank, answers);
}

}  // namespace letgames
