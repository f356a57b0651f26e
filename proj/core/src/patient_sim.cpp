// SPDX-License-Identifier: Apache-2.0
#include "letgames/patient_sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "agent_util.hpp"
#include "letgames/archive.hpp"
#include "letgames/schemas.hpp"
#include "letgames/text.hpp"

namespace letgames {

Impairment impairment_template(CognitiveDomain domain, Severity severity) {
  Impairment imp;
  imp.domain = domain;
  imp.severity = severity;
  switch (domain) {
    case CognitiveDomain::memory:
      imp.description = "Has trouble holding on to new information such as names, times and short lists; details fade within minutes.";
      imp.daily_impact = "Misplaces belongings and forgets appointments unless they are written down.";
      break;
    case CognitiveDomain::attention:
      imp.description = "Finds it hard to stay focused and to pick out the relevant detail when several things happen at once.";
      imp.daily_impact = "Loses the thread of conversations in busy places and skips steps in routine chores.";
      break;
    case CognitiveDomain::verbal_learning:
      imp.description = "Needs many repetitions to learn new wording such as instructions or a short verse.";
      imp.daily_impact = "Struggles to follow spoken directions and to learn the names of new acquaintances.";
      break;
    case CognitiveDomain::executive_function:
      imp.description = "Has difficulty planning, putting several steps in order and changing approach when something goes wrong.";
      imp.daily_impact = "Finds a multi-step meal or a morning of errands overwhelming.";
      break;
    case CognitiveDomain::social_cognition:
      imp.description = "Is slow to read other people's feelings and intentions from their words and tone.";
      imp.daily_impact = "Sometimes misses that a friend is upset and replies in ways others find off-key.";
      break;
    case CognitiveDomain::language:
      imp.description = "Searches for words and often describes an object instead of naming it.";
      imp.daily_impact = "Phone calls and shopping lists take more effort than they used to.";
      break;
  }
  return imp;
}

Cohort build_cohort(const CohortSpec& spec) {
  if (spec.base_profiles.empty()) throw Error(ErrorCode::invalid_argument, "cohort needs at least one base profile");
  if (!(spec.depression_rate >= 0.0 && spec.depression_rate <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "depression_rate must lie in [0, 1]");
  }
  Cohort c;
  for (const auto& base : spec.base_profiles) {
    for (auto d : spec.domains) {
      PatientProfile p = base;
      p.id = base.id + "-" + std::string(enum_name(d));
      p.impairment = impairment_template(d, spec.severity);
      p.depression_comorbid = false;
      c.sps.push_back(std::move(p));
    }
  }
  const auto flagged = static_cast<std::size_t>(std::llround(spec.depression_rate * static_cast<double>(c.sps.size())));
  std::vector<std::size_t> order(c.sps.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(spec.rng_seed);
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t i = 0; i < flagged; ++i) c.sps[order[i]].depression_comorbid = true;

  for (int k = 0; k < spec.controls_per_kind; ++k) {
    for (const auto& base : spec.base_profiles) {
      PatientProfile p = base;
      p.id = base.id + "-hc" + (spec.controls_per_kind > 1 ? std::to_string(k + 1) : std::string());
      p.impairment.reset();
      p.depression_comorbid = false;
      c.controls.push_back(std::move(p));
    }
  }
  return c;
}

namespace {

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot read " + path.string());
  std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_json(body);
}

}  // namespace

std::vector<PatientProfile> load_profiles(const std::filesystem::path& path) {
  const Json doc = read_json_file(path);
  if (!doc.is_array()) throw Error(ErrorCode::parse_error, path.string() + ": expected an array of profiles");
  return decode<std::vector<PatientProfile>>(doc);
}

Cohort load_cohort(const std::filesystem::path& path) {
  const Json doc = read_json_file(path);
  Cohort c;
  if (doc.is_array()) {
    for (auto& p : decode<std::vector<PatientProfile>>(doc)) (p.healthy() ? c.controls : c.sps).push_back(std::move(p));
    return c;
  }
  if (doc.contains("sps")) c.sps = decode<std::vector<PatientProfile>>(doc["sps"]);
  if (doc.contains("controls")) c.controls = decode<std::vector<PatientProfile>>(doc["controls"]);
  return c;
}

void save_cohort(const std::filesystem::path& path, const Cohort& cohort) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path.string());
  out << Json{{"sps", encode(cohort.sps)}, {"controls", encode(cohort.controls)}}.dump(2) << "\n";
}

std::uint64_t stable_hash(std::initializer_list<std::string_view> parts, std::uint64_t seed) {
  std::uint64_t h = 1469598103934665603ULL ^ seed;
  for (auto part : parts) {
    for (unsigned char c : part) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    h ^= 0xff;
    h *= 1099511628211ULL;
  }
  return h;
}

double LatencyModel::sample(const PatientProfile& profile, std::uint64_t seed) const {
  const double median = profile.healthy() ? median_healthy : median_impaired;
  std::mt19937_64 rng(seed);
  std::lognormal_distribution<double> dist(std::log(median), sigma);
  double x = dist(rng);
  for (int i = 0; i < 32 && (x < lo || x > hi); ++i) x = dist(rng);
  return std::clamp(x, lo, hi);
}

std::string render_for_player(const TurnOutput& out) {
  std::string s = out.narrative;
  if (out.npc_dialogue && !out.npc_dialogue->empty()) s += "\n" + *out.npc_dialogue;
  if (out.gentle_guidance && !out.gentle_guidance->empty()) s += "\n" + *out.gentle_guidance;
  if (!out.current_goal.empty()) s += "\nGoal: " + out.current_goal;
  if (!out.suggested_actions.empty()) {
    s += "\nYou could:";
    for (const auto& a : out.suggested_actions) s += "\n- " + a.action;
  }
  return s;
}

std::string simulator_prompt(const PatientProfile& p) {
  std::map<std::string, std::string> vars{{"name", p.name},
                                          {"age", std::to_string(p.age)},
                                          {"gender", p.gender},
                                          {"occupation", p.occupation},
                                          {"life_experience", p.life_experience}};
  if (p.healthy()) return prompts::render(prompts::get(prompts::kSimHealthy), vars);
  vars["domain"] = std::string(enum_name(p.impairment->domain));
  vars["severity"] = std::string(enum_name(p.impairment->severity));
  vars["description"] = p.impairment->description;
  vars["daily_impact"] = p.impairment->daily_impact;
  return prompts::render(prompts::get(prompts::kSimImpaired), vars);
}

PatientSimulator::PatientSimulator(LlmGateway& gateway, std::uint64_t seed, ModelConfig config, LatencyModel latency)
    : gateway_(gateway), seed_(seed), config_(std::move(config)), latency_(latency) {}

SimTurn PatientSimulator::simulate_turn(const PatientProfile& profile, std::string_view game_output,
                                        const std::vector<SimExchange>& history, bool is_question_moment) const {
  const std::uint64_t turn_seed =
      stable_hash({profile.id, std::to_string(history.size()), game_output}, seed_);
  SimTurn turn;
  turn.declared_latency_seconds = latency_.sample(profile, turn_seed);
  if (text::trim(game_output).empty()) {
    turn.action = "Sorry, I didn't quite catch that. What should I do now?";
    return turn;
  }

  Json past = Json::array();
  for (const auto& h : history) past.push_back({{"game", h.game}, {"you", h.player}});
  Json persona{{"condition", profile.healthy() ? "healthy" : "impaired"}, {"profile_id", profile.id}};
  if (!profile.healthy()) {
    persona["domain"] = profile.impairment->domain;
    persona["severity"] = profile.impairment->severity;
  }
  Json ctx{{"persona", persona},
           {"game_output", std::string(game_output)},
           {"is_question_moment", is_question_moment},
           {"history", past},
           {"turn_seed", std::to_string(turn_seed)}};
  ChatRequest req;
  req.system = simulator_prompt(profile);
  ctx["task"] = std::string(schema::kSimAction);
  req.messages.push_back({"user", ctx.dump(2)});
  req.config = config_;

  auto check = [](const Json& doc) {
    std::vector<std::string> v;
    const std::string a = text::trim(doc.value("action", ""));
    if (a.empty()) v.push_back("action: must not be empty");
    for (const char* bad : {"i want to", "i plan to", "i would like to"}) {
      if (text::starts_with_ci(a, bad)) v.push_back(std::string("action: state the action directly, without \"") + bad + "\"");
    }
    return v;
  };
  try {
    auto resp = gateway_.complete_structured(std::move(req), std::string(schema::kSimAction), check);
    turn.action = text::trim((*resp.parsed_document)["action"].get<std::string>());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::schema_exhausted || e.code() == ErrorCode::provider_unavailable) {
      throw Error(ErrorCode::sim_failed, e.what());
    }
    throw;
  }
  return turn;
}

SimTurn PatientSimulator::simulate_turn(const PatientProfile& profile, const TurnOutput& game_output,
                                        const std::vector<SimExchange>& history) const {
  return simulate_turn(profile, render_for_player(game_output), history, game_output.is_question_moment);
}

HumanAdapter::HumanAdapter(ReadLine read_line, Clock clock, Reprompt reprompt)
    : read_line_(std::move(read_line)), clock_(std::move(clock)), reprompt_(std::move(reprompt)) {
  if (!clock_) {
    clock_ = [] {
      return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
    };
  }
}

SimTurn HumanAdapter::next() {
  const double start = clock_();
  for (;;) {
    auto line = read_line_();
    if (!line) throw Error(ErrorCode::channel_closed, "input channel closed");
    std::string action = text::trim(*line);
    if (action.empty()) {
      if (reprompt_) reprompt_();
      continue;
    }
    return SimTurn{std::move(action), std::max(0.0, clock_() - start)};
  }
}

}  // namespace letgames
