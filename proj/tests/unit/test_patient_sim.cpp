// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <numeric>
#include <regex>

#include "letgames/error.hpp"
#include "letgames/patient_sim.hpp"
#include "letgames/scales.hpp"
#include "letgames/text.hpp"
#include "test_support.hpp"

using namespace letgames;
using namespace letgames::testing;

namespace {

const std::string kSimId{schema::kSimAction};

const std::vector<PatientProfile>& bases() {
  static const auto b = load_profiles(data_path("profiles_base.json"));
  return b;
}

// Answers earning exactly `points` on a bank scored one point per slot, by
// giving the first listed phrase of the first `points` slots in item order.
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

std::vector<std::string> all_correct(const ScaleBank& bank) {
  std::vector<std::string> out;
  for (const auto& item : bank.items) {
    std::vector<std::string> said;
    for (const auto& slot : item.slots) said.push_back(slot.front());
    out.push_back(text::join(said, ", "));
  }
  return out;
}

int count_named(const std::string& reply, const std::vector<std::string>& names) {
  int n = 0;
  for (const auto& name : names) n += text::mentions(reply, name) ? 1 : 0;
  return n;
}

}  // namespace

TEST(Cohort, FullSizeAndExactDepressionShare) {
  ASSERT_EQ(bases().size(), 100u);
  CohortSpec spec;
  spec.base_profiles = bases();
  const Cohort c = build_cohort(spec);
  EXPECT_EQ(c.sps.size(), 600u);
  EXPECT_EQ(c.controls.size(), 100u);
  const auto flagged = std::count_if(c.sps.begin(), c.sps.end(), [](const PatientProfile& p) { return p.depression_comorbid; });
  EXPECT_EQ(flagged, 180);
  for (const auto& p : c.sps) {
    ASSERT_TRUE(p.impairment);
    EXPECT_TRUE(profile_violations(p).empty());
  }
  for (const auto& p : c.controls) {
    EXPECT_TRUE(p.healthy());
    EXPECT_FALSE(p.depression_comorbid);
  }
  std::set<std::string> ids;
  for (const auto& p : c.sps) ids.insert(p.id);
  for (const auto& p : c.controls) ids.insert(p.id);
  EXPECT_EQ(ids.size(), 700u);
}

TEST(Cohort, DeterministicUnderSeed) {
  CohortSpec spec;
  spec.base_profiles = bases();
  const Cohort a = build_cohort(spec);
  const Cohort b = build_cohort(spec);
  EXPECT_EQ(a.sps, b.sps);
  spec.rng_seed = 43;
  const Cohort c = build_cohort(spec);
  EXPECT_NE(a.sps, c.sps);
}

TEST(Cohort, RoundsTheDepressionCount) {
  CohortSpec spec;
  spec.base_profiles = {bases()[0], bases()[1], bases()[2]};
  spec.domains = {CognitiveDomain::memory};
  const Cohort c = build_cohort(spec);
  const auto flagged = std::count_if(c.sps.begin(), c.sps.end(), [](const PatientProfile& p) { return p.depression_comorbid; });
  EXPECT_EQ(flagged, 1);  // round(0.3 * 3)
}

TEST(Cohort, SaveAndLoadRoundTrip) {
  TempDir dir;
  CohortSpec spec;
  spec.base_profiles = {bases()[0], bases()[1]};
  const Cohort c = build_cohort(spec);
  save_cohort(dir.path() / "cohort.json", c);
  const Cohort back = load_cohort(dir.path() / "cohort.json");
  EXPECT_EQ(back.sps, c.sps);
  EXPECT_EQ(back.controls, c.controls);
}

TEST(Cohort, NeedsABaseProfile) { EXPECT_THROW(build_cohort(CohortSpec{}), Error); }

TEST(Latency, ImpairedPlayersAreSlowerAndBounded) {
  LatencyModel m;
  const PatientProfile healthy = sample_profile();
  const PatientProfile impaired = impaired_profile(CognitiveDomain::memory);
  double sh = 0, si = 0;
  for (std::uint64_t s = 0; s < 500; ++s) {
    const double h = m.sample(healthy, s);
    const double i = m.sample(impaired, s);
    EXPECT_GE(h, m.lo);
    EXPECT_LE(i, m.hi);
    sh += h;
    si += i;
  }
  EXPECT_GT(si, sh);
  EXPECT_EQ(m.sample(healthy, 9), m.sample(healthy, 9));
}

TEST(Simulator, PromptCarriesPersona) {
  const auto prompt = simulator_prompt(impaired_profile(CognitiveDomain::memory, Severity::severe));
  EXPECT_NE(prompt.find("Arthur Novak"), std::string::npos);
  EXPECT_NE(prompt.find("severe"), std::string::npos);
  EXPECT_FALSE(std::regex_search(prompt, std::regex(R"(\{[a-z_]+\})")));
  const auto healthy = simulator_prompt(sample_profile());
  EXPECT_NE(healthy.find("Margaret Lee"), std::string::npos);
}

TEST(Simulator, EmptyGameOutputGetsClarifyingQuestion) {
  auto routed = std::make_shared<RoutedScriptProvider>();
  auto gw = quick_gateway(routed);
  PatientSimulator sim(*gw, 1);
  const auto turn = sim.simulate_turn(sample_profile(), "   ", {});
  EXPECT_FALSE(turn.action.empty());
  EXPECT_NE(turn.action.find('?'), std::string::npos);
  EXPECT_TRUE(routed->requests().empty());
}

TEST(Simulator, ModelFailureIsSimFailed) {
  auto routed = std::make_shared<RoutedScriptProvider>();
  for (int i = 0; i < 4; ++i) routed->push(kSimId, "{}");
  auto gw = quick_gateway(routed);
  PatientSimulator sim(*gw, 1);
  try {
    (void)sim.simulate_turn(sample_profile(), "Rosa waves.", {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::sim_failed);
  }
}

TEST(Simulator, ModerateMemoryRecallsOneOrTwoOfThree) {
  auto gw = quick_gateway(synthetic());
  const std::vector<std::string> names{"Alice", "Bruno", "Clara"};
  const std::vector<SimExchange> history{
      {"Rosa tells you who is coming to lunch:\n- Alice\n- Bruno\n- Clara", "I nod and thank Rosa."},
      {"You help Henry carry the crates.", "I carry the crate."}};
  int healthy_total = 0;
  int impaired_total = 0;
  const int runs = 100;
  for (int seed = 0; seed < runs; ++seed) {
    PatientSimulator sim(*gw, static_cast<std::uint64_t>(seed));
    const auto h = sim.simulate_turn(sample_profile(), "Rosa asks: who is coming to lunch?", history, true);
    const auto m = sim.simulate_turn(impaired_profile(CognitiveDomain::memory, Severity::moderate),
                                     "Rosa asks: who is coming to lunch?", history, true);
    const int hn = count_named(h.action, names);
    const int mn = count_named(m.action, names);
    EXPECT_EQ(hn, 3) << h.action;
    EXPECT_GE(mn, 1) << m.action;
    EXPECT_LE(mn, 2) << m.action;
    healthy_total += hn;
    impaired_total += mn;
  }
  EXPECT_LT(impaired_total, healthy_total);
}

TEST(Simulator, RenderedTurnShowsChoicesOutsideQuestionMoments) {
  TurnOutput out = plain_turn("Rosa smiles.", {"Wave to Rosa", "Walk to the bakery"});
  const auto shown = render_for_player(out);
  EXPECT_NE(shown.find("Rosa smiles."), std::string::npos);
  EXPECT_NE(shown.find("Walk to the bakery"), std::string::npos);
  TurnOutput ask = plain_turn("Rosa asks what she needed.", {});
  ask.is_question_moment = true;
  EXPECT_EQ(render_for_player(ask).find("You could:"), std::string::npos);
}

TEST(HumanAdapter, ForwardsActionWithMeasuredLatency) {
  std::vector<std::optional<std::string>> lines{"check the list"};
  double now = 100.0;
  HumanAdapter adapter([&]() -> std::optional<std::string> {
    now += 8.0;
    auto l = lines.front();
    lines.erase(lines.begin());
    return l;
  }, [&] { return now; });
  const auto turn = adapter.next();
  EXPECT_EQ(turn.action, "check the list");
  EXPECT_DOUBLE_EQ(turn.declared_latency_seconds, 8.0);
}

TEST(HumanAdapter, BlankLinesRepromptWithoutATurn) {
  std::vector<std::optional<std::string>> lines{"", "   ", "wave"};
  int reprompts = 0;
  HumanAdapter adapter([&]() -> std::optional<std::string> {
    auto l = lines.front();
    lines.erase(lines.begin());
    return l;
  }, [] { return 0.0; }, [&] { ++reprompts; });
  EXPECT_EQ(adapter.next().action, "wave");
  EXPECT_EQ(reprompts, 2);
}

TEST(HumanAdapter, ClosedChannel) {
  HumanAdapter adapter([]() -> std::optional<std::string> { return std::nullopt; });
  try {
    (void)adapter.next();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::channel_closed);
  }
}

TEST(Scales, BanksMatchTheirMaxima) {
  const auto mmse = ScaleBank::load(data_path("scale_mmse.json"));
  const auto moca = ScaleBank::load(data_path("scale_moca_blind.json"));
  EXPECT_EQ(mmse.max_score, kMmseMax);
  EXPECT_EQ(moca.max_score, kMocaBlindMax);
  int sum = 0;
  for (const auto& i : mmse.items) sum += i.max_points();
  EXPECT_EQ(sum, 19);
  sum = 0;
  for (const auto& i : moca.items) sum += i.max_points();
  EXPECT_EQ(sum, 16);
}

TEST(Scales, AllCorrectScoresTheMaximum) {
  for (const char* file : {"scale_mmse.json", "scale_moca_blind.json"}) {
    const auto bank = ScaleBank::load(data_path(file));
    const auto r = score_answers(bank, all_correct(bank));
    EXPECT_EQ(r.score, bank.max_score) << file;
    EXPECT_TRUE(r.passes_healthy_threshold);
  }
}

TEST(Scales, PartialAnswersScoreExactly) {
  const auto bank = ScaleBank::load(data_path("scale_mmse.json"));
  for (int points = 0; points <= kMmseMax; ++points) {
    const auto r = score_answers(bank, answers_worth(bank, points));
    EXPECT_EQ(r.score, points);
    EXPECT_EQ(r.passes_healthy_threshold, points >= 16);
  }
}

TEST(Scales, SerialSevensUseTheCreditTable) {
  const auto bank = ScaleBank::load(data_path("scale_moca_blind.json"));
  const ScaleItem* sevens = nullptr;
  for (const auto& i : bank.items) {
    if (i.id == "serial_sevens") sevens = &i;
  }
  ASSERT_NE(sevens, nullptr);
  EXPECT_EQ(sevens->score("93"), 1);
  EXPECT_EQ(sevens->score("93, 86"), 2);
  EXPECT_EQ(sevens->score("93, 86, 79"), 2);
  EXPECT_EQ(sevens->score("93 86 79 72"), 3);
  EXPECT_EQ(sevens->score("no idea"), 0);
}

TEST(Scales, Thresholds) {
  EXPECT_TRUE(passes_threshold(ScaleKind::mmse, 16));
  EXPECT_FALSE(passes_threshold(ScaleKind::mmse, 15.99));
  EXPECT_FALSE(passes_threshold(ScaleKind::mmse, 14.27));
  EXPECT_TRUE(passes_threshold(ScaleKind::moca_blind, 13));
  EXPECT_FALSE(passes_threshold(ScaleKind::moca_blind, 12));
}

TEST(Scales, WrongAnswerCountIsRejected) {
  const auto bank = ScaleBank::load(data_path("scale_mmse.json"));
  EXPECT_THROW(score_answers(bank, {"2023"}), Error);
}

TEST(Scales, BankWithWrongMaximumIsRejected) {
  Json j = read_fixture(data_path("scale_mmse.json"));
  j["max_score"] = 20;
  EXPECT_THROW(ScaleBank::from_json(j), Error);
}

TEST(Scales, AdministeredThroughTheSimulator) {
  const auto bank = ScaleBank::load(data_path("scale_mmse.json"));
  auto routed = std::make_shared<RoutedScriptProvider>();
  for (const auto& a : all_correct(bank)) routed->push_json(kSimId, Json{{"action", a}});
  auto gw = quick_gateway(routed);
  PatientSimulator sim(*gw, 3);
  const auto r = administer_scale(sample_profile(), bank, sim);
  EXPECT_EQ(r.score, 19);
  EXPECT_EQ(r.max, 19);
  EXPECT_TRUE(r.passes_healthy_threshold);
  EXPECT_EQ(routed->requests_for(kSimId).size(), bank.items.size());
}
