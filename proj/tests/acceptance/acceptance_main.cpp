// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one PASS/FAIL line per primary criterion. Every check
// runs against scripted or synthetic providers; the live-model smoke check
// runs only when LETGAMES_LLM_URL is set.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "letgames/archive.hpp"
#include "letgames/cognition.hpp"
#include "letgames/critic.hpp"
#include "letgames/error.hpp"
#include "letgames/logging.hpp"
#include "letgames/eval.hpp"
#include "letgames/openai_provider.hpp"
#include "letgames/psychology.hpp"
#include "letgames/reliability.hpp"
#include "letgames/reme.hpp"
#include "letgames/scales.hpp"
#include "letgames/session.hpp"
#include "letgames/text.hpp"
#include "test_support.hpp"

using namespace letgames;
using namespace letgames::testing;

namespace {

// Thrown by `require` to fail the current criterion with a reason.
struct CheckFailed {
  std::string why;
};

void require(bool ok, const std::string& why) {
  if (!ok) throw CheckFailed{why};
}

bool near(double a, double b, double tol = 1e-9) { return std::fabs(a - b) <= tol; }

enum class Outcome { pass, fail, skip };

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;  // 0 = no runtime limit
  std::function<Outcome()> run;
};

// ---- 1: difficulty trajectory ------------------------------------------------

Outcome difficulty_trajectory() {
  int level = 3;
  std::vector<int> played;
  for (int ct : {65, 90, 85, 80, 80}) {
    played.push_back(level);
    level = step_difficulty(ct, level);
  }
  std::string shown;
  for (int l : played) shown += std::to_string(l) + " ";
  require(played == std::vector<int>{3, 2, 3, 4, 4}, "levels " + shown);
  require(level == 4, "level after the fifth session is " + std::to_string(level));
  return Outcome::pass;
}

// ---- 2: metric oracle --------------------------------------------------------

RecordJudgment judgment(const std::string& id) {
  RecordJudgment j;
  j.record_id = id;
  j.evaluator = "judge-a";
  j.inferred_domains = {CognitiveDomain::memory};
  return j;
}

std::vector<RecordMeta> metas_for(const std::vector<RecordJudgment>& js) {
  std::vector<RecordMeta> out;
  for (const auto& j : js) out.push_back({j.record_id, CognitiveDomain::memory, AgeGroup::senior});
  return out;
}

void check_optional(const std::optional<double>& got, const Json& want, const std::string& what) {
  if (want.is_null()) {
    require(!got.has_value(), what + " should be n/a");
  } else {
    require(got.has_value(), what + " is n/a");
    require(near(*got, want.get<double>()), what + " = " + std::to_string(*got) + ", oracle " + want.dump());
  }
}

Outcome metric_oracle() {
  const Json corpus = read_fixture(fixture_path("judged_corpus_20.json"));
  std::vector<RecordJudgment> js;
  std::vector<RecordMeta> metas;
  for (const auto& r : corpus.at("judgments")) js.push_back(r.get<RecordJudgment>());
  for (const auto& m : corpus.at("metas")) {
    metas.push_back({m.at("record_id").get<std::string>(), decode<CognitiveDomain>(m.at("target_domain")),
                     m.at("age_group") == "senior" ? AgeGroup::senior : AgeGroup::non_senior});
  }
  require(js.size() == 20, "corpus has " + std::to_string(js.size()) + " records");
  const Json oracle = read_fixture(fixture_path("judged_corpus_20.oracle.json"));
  const auto report = compute_metrics(js, metas);
  require(report.metrics.size() == kMetricNames.size(), "metric count");
  for (const auto& m : report.metrics) {
    const Json& want = oracle.at(m.name);
    check_optional(m.value, want.at("value"), m.name);
    check_optional(m.normalized_macro, want.at("normalized_macro"), m.name + " macro");
    for (auto it = want.at("per_subgroup").begin(); it != want.at("per_subgroup").end(); ++it) {
      require(m.per_subgroup.count(it.key()) == 1, m.name + " lacks subgroup " + it.key());
      check_optional(m.per_subgroup.at(it.key()), it.value(), m.name + "/" + it.key());
    }
  }

  // Trivial ratio cases.
  std::vector<RecordJudgment> ten;
  for (int i = 0; i < 10; ++i) ten.push_back(judgment("r" + std::to_string(i)));
  ten[0].safe = false;
  ten[0].risk_behaviors = {"CRITICIZING"};
  require(near(*compute_metrics(ten, metas_for(ten)).get("Safe").value, 0.9), "Safe 9/10");

  std::vector<RecordJudgment> hints{judgment("a"), judgment("b")};
  hints[0].hints_required = 3;
  hints[0].hints_provided = 2;
  hints[1].hints_required = 1;
  hints[1].hints_provided = 1;
  require(near(*compute_metrics(hints, metas_for(hints)).get("NeHi").value, 0.75), "NeHi 3/4");

  std::vector<RecordJudgment> anx{judgment("a"), judgment("b"), judgment("c")};
  anx[0].anxiety_instances = 3;
  anx[0].alleviation_attempts = 2;
  anx[0].anxiety_free = false;
  anx[1].anxiety_instances = 2;
  anx[1].alleviation_attempts = 2;
  anx[1].anxiety_free = false;
  const auto r = compute_metrics(anx, metas_for(anx));
  require(near(*r.get("Alle").value, 0.8), "Alle 4/5");
  require(near(*r.get("Anxi").value, 1.0 / 3.0), "Anxi 1/3");
  return Outcome::pass;
}

// ---- 3: critic loop bound ----------------------------------------------------

Outcome critic_loop_bound() {
  std::mt19937_64 rng(20241);
  for (int run = 0; run < 1000; ++run) {
    const double p_approve = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const bool judge_can_fail = rng() % 4 == 0;
    int generations = 0;
    int first_approved = 0;
    auto produce = [&](const std::vector<std::string>&, int) {
      ++generations;
      return plain_turn("candidate " + std::to_string(generations));
    };
    auto judge = [&](const TurnOutput&, const std::vector<std::string>&) {
      if (judge_can_fail && rng() % 3 == 0) throw Error(ErrorCode::critique_failed, "scripted failure");
      CritiqueResult c;
      c.approved = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p_approve;
      if (!c.approved) c.suggestions = {"vary the scene"};
      if (c.approved && first_approved == 0) first_approved = generations;
      return c;
    };
    const auto res = refine_until_approved(produce, judge);
    require(generations <= 4 && res.attempts <= 4, "run " + std::to_string(run) + " used " +
                                                        std::to_string(generations) + " generations");
    require(res.attempts == generations, "attempt count disagrees with generations");
    if (first_approved) require(res.approved && res.attempts == first_approved, "stopped late or early");
    if (!first_approved) require(!res.approved && res.attempts == 4, "unapproved run stopped early");
  }

  // Delta boundary through the model review: 7 of 10 approves, 6 of 10 rejects.
  const std::vector<std::string> prior(10, "tighten the wording");
  for (int addressed : {7, 6}) {
    auto routed = std::make_shared<RoutedScriptProvider>();
    Json doc = approving_critique(10);
    for (int i = addressed; i < 10; ++i) doc["addressed"][static_cast<std::size_t>(i)] = false;
    routed->push_json(std::string(schema::kCritique), doc);
    auto gw = quick_gateway(routed);
    Critic critic(gw.get());
    CriticContext ctx;
    const auto v = critic.critique(plain_turn("A calm morning."), ctx, prior);
    require(v.approved == (addressed == 7), std::to_string(addressed) + "/10 gave approved=" +
                                                std::to_string(v.approved));
  }
  return Outcome::pass;
}

// ---- 4: rule-critic golden suite ---------------------------------------------

CriticContext ctx_of(Phase phase, std::vector<std::string> present, std::vector<std::string> declared,
                     std::vector<std::string> recent = {}) {
  CriticContext c;
  c.phase = phase;
  c.npcs_present = std::move(present);
  c.declared_npcs = std::move(declared);
  c.recent_actions = std::move(recent);
  return c;
}

Outcome rule_critic_golden() {
  struct Golden {
    std::string_view type;
    TurnOutput seeded;
    TurnOutput clean;
    CriticContext ctx;
  };
  const std::vector<Golden> cases{
      {issue::kNpcInconsistency, plain_turn("Uncle Zhang calls out from the doorway."),
       plain_turn("Aunt Li calls out from the doorway."), ctx_of(Phase::none, {"Aunt Li"}, {"Aunt Li", "Uncle Zhang"})},
      {issue::kPhaseViolation, plain_turn("Rosa reads out the names.", {"Recall the participant names"}),
       plain_turn("Rosa reads out the names.", {"Greet the participants"}), ctx_of(Phase::encoding, {}, {})},
      {issue::kOperationIllegality, plain_turn("The garden is quiet.", {"Imagine the flowers blooming"}),
       plain_turn("The garden is quiet.", {"Water the flowers"}), ctx_of(Phase::none, {}, {})},
      {issue::kActionRepetition, plain_turn("Nothing new here.", {"Look around the stall"}),
       plain_turn("Nothing new here.", {"Walk to the bakery"}), ctx_of(Phase::none, {}, {}, {"look around the stall"})},
  };
  for (const auto& g : cases) {
    const auto seeded = critique_rules_only(g.seeded, g.ctx);
    require(seeded.has_issue(g.type), std::string(g.type) + " not detected");
    require(seeded.consistency_score < 60, std::string(g.type) + " kept consistency at " +
                                               std::to_string(seeded.consistency_score));
    const auto clean = critique_rules_only(g.clean, g.ctx);
    require(clean.issues.empty(), std::string(g.type) + " clean twin flagged");
    require(clean.approved, std::string(g.type) + " clean twin rejected");
  }
  // Two medium issues reject even without a high one.
  auto two = plain_turn("Nothing new here.", {"Look around the stall", "Walk to the bakery"});
  const auto v = critique_rules_only(two, ctx_of(Phase::none, {}, {}, {"look around the stall", "walk to the bakery"}));
  require(v.issues.size() >= 2 && !v.approved, "two issues did not reject");
  return Outcome::pass;
}

// ---- 5: hint-gate truth table ------------------------------------------------

std::optional<HintLevel> expected_level(double idle, int failures, std::optional<double> since_hint, bool succeeded,
                                        bool exploring, std::optional<EmotionState> emo) {
  const bool cooling = since_hint.has_value() && *since_hint < 15.0;
  const bool idle_long = idle >= 20.0;
  const bool busy = exploring && failures == 0 && !idle_long;
  if (succeeded || cooling || busy) return std::nullopt;
  if (failures >= 3 || emo == EmotionState::frustrated || emo == EmotionState::anxious) return HintLevel::L3;
  if (failures == 2 || emo == EmotionState::confused) return HintLevel::L2;
  if (failures == 1 || idle_long) return HintLevel::L1;
  return std::nullopt;
}

Outcome hint_gate_table() {
  const std::vector<std::optional<EmotionState>> emotions{
      std::nullopt,           EmotionState::calm,     EmotionState::engaged,    EmotionState::excited,
      EmotionState::mild_anxiety, EmotionState::confused, EmotionState::frustrated, EmotionState::fatigued,
      EmotionState::anxious};
  int rows = 0;
  for (double idle : {0.0, 5.0, 19.9, 20.0, 25.0, 90.0}) {
    for (int failures = 0; failures <= 5; ++failures) {
      for (std::optional<double> since : {std::optional<double>{}, std::optional<double>{0.0},
                                          std::optional<double>{10.0}, std::optional<double>{14.9},
                                          std::optional<double>{15.0}, std::optional<double>{40.0}}) {
        for (bool succeeded : {false, true}) {
          for (bool exploring : {false, true}) {
            for (const auto& emo : emotions) {
              const HintContext ctx{idle, failures, since, succeeded, exploring, emo};
              const auto want = expected_level(idle, failures, since, succeeded, exploring, emo);
              std::ostringstream row;
              row << "idle=" << idle << " failures=" << failures << " since=" << since.value_or(-1)
                  << " succeeded=" << succeeded << " exploring=" << exploring;
              require(hint_gate(ctx) == want, row.str());
              ++rows;
            }
          }
        }
      }
    }
  }
  require(rows == 6 * 6 * 6 * 2 * 2 * 9, "grid size");
  return Outcome::pass;
}

// ---- 6: reliability statistics -----------------------------------------------

using Matrix = std::vector<std::vector<std::optional<double>>>;

double brute_alpha(const Matrix& m, MeasurementLevel level) {
  auto delta = [&](double a, double b) {
    return level == MeasurementLevel::nominal ? (a == b ? 0.0 : 1.0) : (a - b) * (a - b);
  };
  std::vector<double> pool;
  double d_o = 0.0;
  for (std::size_t i = 0; i < m.front().size(); ++i) {
    std::vector<double> u;
    for (const auto& rater : m) {
      if (rater[i]) u.push_back(*rater[i]);
    }
    if (u.size() < 2) continue;
    double s = 0.0;
    for (std::size_t a = 0; a < u.size(); ++a) {
      for (std::size_t b = 0; b < u.size(); ++b) {
        if (a != b) s += delta(u[a], u[b]);
      }
    }
    d_o += s / static_cast<double>(u.size() - 1);
    pool.insert(pool.end(), u.begin(), u.end());
  }
  const double n = static_cast<double>(pool.size());
  d_o /= n;
  double d_e = 0.0;
  for (std::size_t a = 0; a < pool.size(); ++a) {
    for (std::size_t b = 0; b < pool.size(); ++b) {
      if (a != b) d_e += delta(pool[a], pool[b]);
    }
  }
  d_e /= n * (n - 1.0);
  return d_e == 0.0 ? 1.0 : 1.0 - d_o / d_e;
}

Outcome reliability() {
  const Matrix perfect{{1.0, 2.0, 3.0, 4.0}, {1.0, 2.0, 3.0, 4.0}, {1.0, 2.0, std::nullopt, 4.0}};
  for (auto level : {MeasurementLevel::nominal, MeasurementLevel::interval}) {
    require(krippendorff_alpha(perfect, level).value == 1.0, "perfect agreement is not 1");
  }
  std::mt19937 rng(77);
  int checked = 0;
  while (checked < 50) {
    const auto raters = static_cast<std::size_t>(2 + rng() % 3);
    const auto items = static_cast<std::size_t>(3 + rng() % 6);
    const auto values = 2 + rng() % 4;
    Matrix m(raters, std::vector<std::optional<double>>(items));
    for (auto& row : m) {
      for (auto& cell : row) {
        if (rng() % 6 != 0) cell = static_cast<double>(rng() % values);
      }
    }
    bool pairable = false;
    for (std::size_t i = 0; i < items; ++i) {
      int c = 0;
      for (const auto& row : m) c += row[i] ? 1 : 0;
      pairable = pairable || c >= 2;
    }
    if (!pairable) continue;
    for (auto level : {MeasurementLevel::nominal, MeasurementLevel::interval}) {
      const double got = krippendorff_alpha(m, level).value;
      const double want = brute_alpha(m, level);
      require(near(got, want), "matrix " + std::to_string(checked) + ": " + std::to_string(got) + " vs " +
                                   std::to_string(want));
    }
    ++checked;
  }
  for (auto [a, b, c, d] : std::vector<std::array<int, 4>>{{20, 5, 10, 15}, {45, 15, 25, 15}, {30, 0, 0, 20}}) {
    std::vector<std::string> r1, r2;
    auto add = [&](int n, const char* x, const char* y) {
      for (int i = 0; i < n; ++i) {
        r1.emplace_back(x);
        r2.emplace_back(y);
      }
    };
    add(a, "yes", "yes");
    add(b, "yes", "no");
    add(c, "no", "yes");
    add(d, "no", "no");
    const double n = a + b + c + d;
    const double po = (a + d) / n;
    const double pe = ((a + b) * (a + c) + (c + d) * (b + d)) / (n * n);
    require(near(cohen_kappa(r1, r2).value, (po - pe) / (1.0 - pe), 1e-12), "kappa on a 2x2 table");
  }
  return Outcome::pass;
}

// ---- 7: normalization --------------------------------------------------------

Outcome normalization() {
  const Json fx = read_fixture(fixture_path("normalization_2x4.json"));
  std::vector<ScoreObservation> obs;
  for (const auto& o : fx.at("observations")) {
    obs.push_back({o.at("evaluator"), o.at("subgroup"), o.at("value").get<double>()});
  }
  const auto r = normalize_scores(obs, 0.0, 5.0);
  std::map<std::string, std::map<std::string, std::pair<double, int>>> sums;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    require(near(r.normalized[i], fx["expected"]["normalized"][i].get<double>()), "value " + std::to_string(i));
    auto& s = sums[obs[i].subgroup][obs[i].evaluator];
    s.first += r.normalized[i];
    s.second += 1;
  }
  for (const auto& [group, by_eval] : sums) {
    std::optional<double> first;
    for (const auto& [e, s] : by_eval) {
      const double mean = s.first / s.second;
      if (!first) first = mean;
      require(near(mean, *first), "evaluator means differ in " + group);
    }
  }
  std::mt19937 rng(9);
  for (int run = 0; run < 500; ++run) {
    std::vector<ScoreObservation> random;
    for (int i = 0; i < 12; ++i) {
      random.push_back({i % 3 == 0 ? "a" : "b", i % 2 ? "g1" : "g2", static_cast<double>(rng() % 6)});
    }
    for (double v : normalize_scores(random, 0.0, 5.0).normalized) require(v >= 0.0 && v <= 5.0, "out of bounds");
  }
  const std::vector<ScoreObservation> flat{{"a", "g", 3.0}, {"a", "g", 3.0}, {"b", "g", 1.0}, {"b", "g", 5.0}};
  const auto f = normalize_scores(flat, 0.0, 5.0);
  require(f.normalized[0] == 3.0 && f.normalized[1] == 3.0, "zero spread did not pass through");
  return Outcome::pass;
}

// ---- 8: end-to-end stubbed session -------------------------------------------

SessionConfig e2e_config(const TempDir& dir, std::uint64_t nonce) {
  SessionConfig cfg;
  cfg.data_dir = dir.path();
  cfg.id_nonce = nonce;
  cfg.reme_candidates = RemeCandidates::load(data_path("reme_candidates.json"));
  return cfg;
}

Outcome end_to_end() {
  TempDir dir;
  auto routed = std::make_shared<RoutedScriptProvider>(synthetic());
  routed->push_json(std::string(schema::kGameSpec), encode(memory_spec()));
  auto gw = quick_gateway(routed);

  std::string game_id;
  int hints = 0;
  int intensive = 0;
  int resets = 0;
  {
    SessionService svc(*gw, e2e_config(dir, 1));
    auto [handle, opening] = svc.create_session(sample_profile(), CognitiveDomain::memory, Method::letgames, 1);
    game_id = handle.session_id;
    require(svc.record(game_id).spec->scenario_name == "Saturday Market", "scripted design was not used");
    for (int i = 0; i < 3; ++i) {
      const auto res = svc.submit_action(game_id, "I fly to the sky", 25.0, "k" + std::to_string(i));
      hints += res.hint ? 1 : 0;
      intensive += res.intervention && res.intervention->intervention == InterventionType::intensive ? 1 : 0;
      resets += res.new_spec ? 1 : 0;
    }
  }
  // A new service on the same data directory resumes the session from its journal.
  SessionService svc(*gw, e2e_config(dir, 2));
  require(svc.get_session(game_id).state.turn_index == 3, "resume lost turns");
  const auto replay = svc.submit_action(game_id, "I fly to the sky", 25.0, "k2");
  require(replay.turn_index == 3, "idempotent replay after restart added a turn");
  for (int i = 3; i < 6; ++i) {
    const auto res = svc.submit_action(game_id, "I fly to the sky", 25.0, "k" + std::to_string(i));
    hints += res.hint ? 1 : 0;
    intensive += res.intervention && res.intervention->intervention == InterventionType::intensive ? 1 : 0;
    resets += res.new_spec ? 1 : 0;
    require(!res.ended, "session ended during the scripted turns");
  }
  require(hints >= 1, "no hint in six turns");
  require(intensive >= 1, "no intensive intervention in six turns");
  require(resets == 1, std::to_string(resets) + " resets in six turns");

  // Finish the easier game with the synthetic player.
  PatientSimulator sim(*gw, 5);
  std::vector<SimExchange> history;
  TurnOutput last = *svc.record(game_id).opening;
  for (int turn = 0; turn < 40; ++turn) {
    const auto move = sim.simulate_turn(sample_profile(), last, history);
    history.push_back({render_for_player(last), move.action});
    const auto res = svc.submit_action(game_id, move.action, move.declared_latency_seconds);
    if (res.ended) break;
    last = res.turn;
  }
  const SessionRecord game = svc.record(game_id);
  require(game.terminated.has_value(), "the game did not end");
  require(record_violations(game).empty(), "record violations: " + text::join(record_violations(game), "; "));

  // One ReMe session.
  auto [reme_handle, reme_opening_turn] =
      svc.create_session(sample_profile(), CognitiveDomain::executive_function, Method::reme, 4);
  const std::string target = svc.record(reme_handle.session_id).reme->target;
  (void)svc.submit_action(reme_handle.session_id, "Is it something you can hold?", 6.0);
  (void)svc.submit_action(reme_handle.session_id, "Give me a hint", 6.0);
  const auto solved = svc.submit_action(reme_handle.session_id, "Is it a " + target + "?", 6.0);
  require(solved.ended && solved.termination == Termination::success, "ReMe session did not end solved");

  // Archive and restart.
  const auto archived = read_records(svc.archive().sessions_file());
  require(archived.size() == 2, std::to_string(archived.size()) + " archived records");
  SessionService restarted(*gw, e2e_config(dir, 3));
  const SessionRecord game_again = restarted.record(game_id);
  require(game_again == game, "resumed game record differs");
  require(restarted.record(reme_handle.session_id).terminated == Termination::success, "resumed ReMe record");

  // Stub judge over both records.
  auto judge_gw = quick_gateway(synthetic());
  const Judge judge(*judge_gw);
  const auto run = evaluate_records(archived, judge, 2);
  require(run.failed_records.empty(), "judge failed on " + text::join(run.failed_records, ","));
  require(run.report.n_records == 2 && run.report.metrics.size() == kMetricNames.size(), "incomplete report");
  for (const auto& m : run.report.metrics) {
    if (m.name != "Alle") require(m.value.has_value(), m.name + " missing");
  }
  return Outcome::pass;
}

// ---- 9: ReMe contract --------------------------------------------------------

Json yes_no(bool yes) {
  return Json{{"thoughts", yes ? "true of the object" : "not true of the object"},
              {"outputs", yes ? "Yes." : "No."},
              {"is_end", false}};
}

Outcome reme_contract() {
  const auto candidates = RemeCandidates::load(data_path("reme_candidates.json"));
  const RemeItem* bike = candidates.find("vehicles", "bicycle");
  require(bike != nullptr, "candidate list lacks vehicles/bicycle");
  const std::string remeid(schema::kRemeAnswer);
  auto routed = std::make_shared<RoutedScriptProvider>();
  routed->push_json(remeid, yes_no(false));
  routed->push_json(remeid, yes_no(true));
  routed->push_json(remeid, yes_no(false));
  auto gw = quick_gateway(routed);
  RemeEngine engine(*gw);
  RemeGame g;
  g.category = "vehicles";
  g.target = *bike;
  auto leaks = [&](const std::string& s) {
    if (text::contains_ci(s, g.target.name)) return true;
    for (const auto& syn : g.target.synonyms) {
      if (text::contains_ci(s, syn)) return true;
    }
    return false;
  };
  require(!leaks(reme_opening(g)), "opening leaks the target");

  struct Step {
    std::string input;
    RemeReplyKind kind;
    std::string prefix;
  };
  const std::vector<Step> script{
      {"Is it in the sky?", RemeReplyKind::answer, "No"},
      {"What is the first letter of its name?", RemeReplyKind::redirect, "I can only answer yes or no"},
      {"Okay. Does it have any wheels?", RemeReplyKind::answer, "Yes"},
      {"Does it have more than two wheels?", RemeReplyKind::answer, "No"},
      {"I am stuck. Can you give me more clues?", RemeReplyKind::summary, "Here is what we know so far"},
  };
  for (const auto& s : script) {
    auto [next, reply] = engine.answer(g, s.input);
    g = next;
    require(reply.kind == s.kind, "'" + s.input + "' got the wrong reply kind");
    require(reply.outputs.rfind(s.prefix, 0) == 0, "'" + s.input + "' -> " + reply.outputs);
    require(!reply.is_end, "ended early");
    require(!leaks(reply.outputs), "leaked on '" + s.input + "'");
  }
  auto [done, reply] = engine.answer(g, "I guess it is a bike.");
  require(reply.kind == RemeReplyKind::solved && reply.is_end && done.solved, "synonym guess did not solve");
  require(text::contains_ci(reply.outputs, "bicycle"), "terminal reply does not reveal the answer");
  try {
    (void)engine.answer(done, "Is it red?");
    require(false, "answered after the end");
  } catch (const Error& e) {
    require(e.code() == ErrorCode::game_ended, "wrong error after the end");
  }
  return Outcome::pass;
}

// ---- 10: scale gating --------------------------------------------------------

std::vector<std::string> answers_worth(const ScaleBank& bank, int points) {
  std::vector<std::string> out;
  for (const auto& item : bank.items) {
    std::vector<std::string> said;
    for (const auto& slot : item.slots) {
      if (points <= 0) break;
      said.push_back(slot.front());
      --points;
    }
    out.push_back(said.empty() ? "I don't know" : text::join(said, ", "));
  }
  return out;
}

Outcome scale_gating() {
  const auto mmse = ScaleBank::load(data_path("scale_mmse.json"));
  const auto moca = ScaleBank::load(data_path("scale_moca_blind.json"));
  const auto full_mmse = score_answers(mmse, answers_worth(mmse, 1000));
  const auto full_moca = score_answers(moca, answers_worth(moca, 1000));
  require(full_mmse.score == 19 && full_mmse.max == 19, "MMSE all-correct " + std::to_string(full_mmse.score));
  require(full_moca.score == 16 && full_moca.max == 16, "MoCA-Blind all-correct " + std::to_string(full_moca.score));

  // All-correct MMSE through the simulator path.
  auto routed = std::make_shared<RoutedScriptProvider>();
  for (const auto& a : answers_worth(mmse, 1000)) routed->push_json(std::string(schema::kSimAction), Json{{"action", a}});
  auto gw = quick_gateway(routed);
  PatientSimulator sim(*gw, 3);
  require(administer_scale(sample_profile(), mmse, sim).score == 19, "administered MMSE");

  for (int p = 0; p <= 19; ++p) {
    require(score_answers(mmse, answers_worth(mmse, p)).passes_healthy_threshold == (p >= 16),
            "MMSE gate at " + std::to_string(p));
  }
  // MoCA-Blind serial sevens uses a credit table, so gate on the scored total.
  std::set<int> seen;
  for (int p = 0; p <= 20; ++p) {
    const auto r = score_answers(moca, answers_worth(moca, p));
    seen.insert(r.score);
    require(r.passes_healthy_threshold == (r.score >= 13), "MoCA-Blind gate at " + std::to_string(r.score));
  }
  require(seen.count(12) == 1 && seen.count(13) == 1, "MoCA-Blind scripts never straddle the threshold");
  // A batch of 100 scripted MMSE runs averaging 14.27 fails the healthy threshold.
  std::vector<int> batch(100, 14);
  for (int i = 0; i < 27; ++i) batch[static_cast<std::size_t>(i)] = 15;
  double sum = 0.0;
  for (int p : batch) sum += score_answers(mmse, answers_worth(mmse, p)).score;
  const double mean = sum / static_cast<double>(batch.size());
  require(near(mean, 14.27), "batch mean " + std::to_string(mean));
  require(!passes_threshold(ScaleKind::mmse, mean), "14.27 passed the MMSE threshold");
  return Outcome::pass;
}

// ---- 11: live-model smoke ----------------------------------------------------

Outcome live_smoke() {
  const char* url = std::getenv("LETGAMES_LLM_URL");
  if (url == nullptr || *url == '\0') return Outcome::skip;
  auto live = std::make_shared<OpenAiProvider>(OpenAiSettings::from_env());
  LlmGateway gw(live);
  TempDir dir;
  SessionConfig cfg;
  cfg.data_dir = dir.path();
  SessionService svc(gw, cfg);
  const Judge judge(gw, ModelConfig::evaluator(), cfg.agent_model.model_name);
  int aligned = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto rec =
        svc.simulate_batch({{impaired_profile(CognitiveDomain::memory, Severity::mild), CognitiveDomain::memory}},
                           Method::letgames, seed)
            .at(0);
    require(rec.spec.has_value(), "session " + std::to_string(seed) + " has no game");
    require(validate_spec(*rec.spec, CognitiveDomain::memory, rec.profile.name).ok(), "spec fails validation");
    aligned += judge.judge_record(rec, CognitiveDomain::memory).da;
  }
  require(aligned >= 4, "DA = 1 on " + std::to_string(aligned) + " of 5");
  return Outcome::pass;
}

}  // namespace

int main() {
  configure_logging(std::getenv("LETGAMES_LOG") != nullptr ? std::getenv("LETGAMES_LOG") : "off");
  const std::vector<Criterion> criteria{
      {1, "difficulty trajectory 3-2-3-4-4", 1.0, difficulty_trajectory},
      {2, "metric oracle on the 20-record corpus", 1.0, metric_oracle},
      {3, "critic loop bound and approval delta", 5.0, critic_loop_bound},
      {4, "rule-critic golden suite", 1.0, rule_critic_golden},
      {5, "hint-gate truth table", 1.0, hint_gate_table},
      {6, "reliability statistics", 5.0, reliability},
      {7, "normalization pipeline", 0.0, normalization},
      {8, "end-to-end stubbed sessions", 10.0, end_to_end},
      {9, "ReMe contract", 0.0, reme_contract},
      {10, "scale gating", 0.0, scale_gating},
      {11, "live-model smoke", 0.0, live_smoke},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome outcome = Outcome::fail;
    std::string why;
    try {
      outcome = c.run();
    } catch (const CheckFailed& f) {
      why = f.why;
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (outcome == Outcome::pass && c.budget_seconds > 0.0 && secs >= c.budget_seconds) {
      outcome = Outcome::fail;
      why = "took " + std::to_string(secs) + " s, limit " + std::to_string(c.budget_seconds) + " s";
    }
    const char* label = outcome == Outcome::pass ? "PASS" : outcome == Outcome::skip ? "SKIP" : "FAIL";
    std::cout << label << " [" << c.id << "] " << c.name << " (" << static_cast<long>(secs * 1000.0) << " ms)";
    if (outcome == Outcome::skip) std::cout << ": LETGAMES_LLM_URL not set";
    if (outcome == Outcome::fail) std::cout << ": " << why;
    std::cout << std::endl;
    failures += outcome == Outcome::fail ? 1 : 0;
  }
  return failures == 0 ? 0 : 1;
}
