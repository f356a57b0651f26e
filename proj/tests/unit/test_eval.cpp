// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "letgames/error.hpp"
#include "letgames/eval.hpp"
#include "letgames/session.hpp"
#include "test_support.hpp"

using namespace letgames;
using namespace letgames::testing;

namespace {

const std::string kDomainsId{schema::kJudgeDomains};
const std::string kRubricId{schema::kJudgeRubric};

struct Corpus {
  std::vector<RecordJudgment> judgments;
  std::vector<RecordMeta> metas;
};

Corpus load_corpus() {
  const Json j = read_fixture(fixture_path("judged_corpus_20.json"));
  Corpus c;
  for (const auto& r : j.at("judgments")) c.judgments.push_back(r.get<RecordJudgment>());
  for (const auto& m : j.at("metas")) {
    c.metas.push_back({m.at("record_id").get<std::string>(), decode<CognitiveDomain>(m.at("target_domain")),
                       m.at("age_group") == "senior" ? AgeGroup::senior : AgeGroup::non_senior});
  }
  return c;
}

RecordJudgment blank(const std::string& id) {
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

void expect_near_opt(const std::optional<double>& got, const Json& want, const std::string& what) {
  if (want.is_null()) {
    EXPECT_FALSE(got.has_value()) << what;
  } else {
    ASSERT_TRUE(got.has_value()) << what;
    EXPECT_NEAR(*got, want.get<double>(), 1e-9) << what;
  }
}

void collect_keys(const Json& j, std::set<std::string>& keys) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      keys.insert(it.key());
      collect_keys(it.value(), keys);
    }
  } else if (j.is_array()) {
    for (const auto& x : j) collect_keys(x, keys);
  }
}

Json rubric_doc(int help) {
  auto scored = [](int s) { return Json{{"score", s}, {"reasoning", "evidence"}}; };
  return Json{{"helpfulness", scored(help)},
              {"difficulty", {{"cognitive_load_score", 4}, {"reasoning", "light"}}},
              {"coherence", scored(4)},
              {"personalization", scored(3)},
              {"enjoyment", scored(4)},
              {"willingness", scored(4)},
              {"safety", {{"risk_behaviors", Json::array()}, {"reasoning", "none"}}},
              {"hints", {{"required", 1}, {"provided", 1}, {"reasoning", "one stall"}}},
              {"anxiety", {{"instances", 0}, {"alleviation_attempts", 0}, {"reasoning", "calm"}}}};
}

SessionRecord memory_record() {
  auto gw = quick_gateway(synthetic());
  TempDir dir;
  SessionConfig cfg;
  cfg.data_dir = dir.path();
  cfg.id_nonce = 1;
  SessionService svc(*gw, cfg);
  auto p = impaired_profile(CognitiveDomain::memory, Severity::mild);
  auto records = svc.simulate_batch({BatchJob{p, CognitiveDomain::memory}}, Method::letgames, 5);
  return records.at(0);
}

}  // namespace

TEST(SetF1, Examples) {
  using D = CognitiveDomain;
  EXPECT_DOUBLE_EQ(set_f1({D::memory}, {D::memory}), 1.0);
  EXPECT_DOUBLE_EQ(set_f1({D::memory}, {D::memory, D::attention}), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(set_f1({D::memory}, {D::attention}), 0.0);
  EXPECT_DOUBLE_EQ(set_f1({D::memory}, {}), 0.0);
  EXPECT_DOUBLE_EQ(set_f1({D::memory, D::attention}, {D::memory}), 2.0 / 3.0);
  try {
    (void)set_f1({}, {D::memory});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::empty_target);
  }
}

TEST(Metrics, NineOfTenSafe) {
  std::vector<RecordJudgment> js;
  for (int i = 0; i < 10; ++i) {
    auto j = blank("r" + std::to_string(i));
    if (i == 0) {
      j.safe = false;
      j.risk_behaviors = {"CRITICIZING"};
    }
    js.push_back(j);
  }
  EXPECT_NEAR(*compute_metrics(js, metas_for(js)).get("Safe").value, 0.9, 1e-12);
}

TEST(Metrics, HintsThreeOfFour) {
  std::vector<RecordJudgment> js{blank("a"), blank("b")};
  js[0].hints_required = 3;
  js[0].hints_provided = 2;
  js[1].hints_required = 1;
  js[1].hints_provided = 1;
  EXPECT_NEAR(*compute_metrics(js, metas_for(js)).get("NeHi").value, 0.75, 1e-12);
}

TEST(Metrics, AlleviationFourOfFive) {
  std::vector<RecordJudgment> js{blank("a"), blank("b"), blank("c")};
  js[0].anxiety_instances = 3;
  js[0].alleviation_attempts = 2;
  js[0].anxiety_free = false;
  js[1].anxiety_instances = 2;
  js[1].alleviation_attempts = 2;
  js[1].anxiety_free = false;
  const auto r = compute_metrics(js, metas_for(js));
  EXPECT_NEAR(*r.get("Alle").value, 0.8, 1e-12);
  EXPECT_NEAR(*r.get("Anxi").value, 1.0 / 3.0, 1e-12);
}

TEST(Metrics, AlleviationWithoutAnxietyIsNotApplicable) {
  std::vector<RecordJudgment> js{blank("a")};
  EXPECT_FALSE(compute_metrics(js, metas_for(js)).get("Alle").value.has_value());
}

TEST(Metrics, MatchTheCommittedOracle) {
  const Corpus c = load_corpus();
  ASSERT_EQ(c.judgments.size(), 20u);
  const Json oracle = read_fixture(fixture_path("judged_corpus_20.oracle.json"));
  const auto report = compute_metrics(c.judgments, c.metas);
  ASSERT_EQ(report.metrics.size(), 11u);
  for (std::size_t i = 0; i < kMetricNames.size(); ++i) {
    const std::string name(kMetricNames[i]);
    const auto& m = report.metrics[i];
    EXPECT_EQ(m.name, name);
    const Json& want = oracle.at(name);
    expect_near_opt(m.value, want.at("value"), name + " value");
    expect_near_opt(m.normalized_macro, want.at("normalized_macro"), name + " macro");
    for (auto it = want.at("per_subgroup").begin(); it != want.at("per_subgroup").end(); ++it) {
      ASSERT_TRUE(m.per_subgroup.count(it.key())) << name << " " << it.key();
      expect_near_opt(m.per_subgroup.at(it.key()), it.value(), name + " " + it.key());
    }
  }
}

TEST(Metrics, ReportJsonAndTable) {
  const Corpus c = load_corpus();
  const auto report = compute_metrics(c.judgments, c.metas);
  const Json j = report.to_json();
  EXPECT_EQ(j.at("n_records"), 20);
  const std::string table = render_metric_table(report);
  for (auto name : kMetricNames) EXPECT_NE(table.find(std::string(name)), std::string::npos);
}

TEST(Metrics, MissingMetaAndEmptyInput) {
  EXPECT_THROW(compute_metrics({}, {}), Error);
  EXPECT_THROW(compute_metrics({blank("a")}, {}), Error);
}

TEST(Normalization, CommittedOffsetFixture) {
  const Json fx = read_fixture(fixture_path("normalization_2x4.json"));
  std::vector<ScoreObservation> obs;
  for (const auto& o : fx.at("observations")) {
    obs.push_back({o.at("evaluator"), o.at("subgroup"), o.at("value").get<double>()});
  }
  const auto r = normalize_scores(obs, 0.0, 5.0);
  const auto& want = fx.at("expected");
  ASSERT_EQ(r.normalized.size(), obs.size());
  for (std::size_t i = 0; i < obs.size(); ++i) EXPECT_NEAR(r.normalized[i], want["normalized"][i].get<double>(), 1e-9);
  for (auto it = want["subgroup_means"].begin(); it != want["subgroup_means"].end(); ++it) {
    EXPECT_NEAR(r.subgroup_means.at(it.key()), it.value().get<double>(), 1e-9);
  }
  EXPECT_NEAR(r.macro, want["macro"].get<double>(), 1e-9);

  // Evaluator means within each subgroup agree after normalization.
  std::map<std::string, std::map<std::string, std::pair<double, int>>> sums;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    auto& s = sums[obs[i].subgroup][obs[i].evaluator];
    s.first += r.normalized[i];
    s.second += 1;
  }
  for (const auto& [group, by_eval] : sums) {
    std::vector<double> means;
    for (const auto& [e, s] : by_eval) means.push_back(s.first / s.second);
    for (double m : means) EXPECT_NEAR(m, means.front(), 1e-9) << group;
  }
}

TEST(Normalization, ZeroSpreadPassesThrough) {
  const std::vector<ScoreObservation> obs{{"a", "g", 3.0}, {"a", "g", 3.0}, {"b", "g", 1.0}, {"b", "g", 5.0}};
  const auto r = normalize_scores(obs, 0.0, 5.0);
  EXPECT_DOUBLE_EQ(r.normalized[0], 3.0);
  EXPECT_DOUBLE_EQ(r.normalized[1], 3.0);
}

TEST(Normalization, OutputsStayWithinBounds) {
  std::mt19937 rng(5);
  for (int run = 0; run < 200; ++run) {
    std::vector<ScoreObservation> obs;
    for (int i = 0; i < 12; ++i) {
      obs.push_back({i % 3 == 0 ? "a" : "b", i % 2 ? "g1" : "g2", static_cast<double>(rng() % 6)});
    }
    const auto r = normalize_scores(obs, 0.0, 5.0);
    for (double v : r.normalized) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 5.0);
    }
  }
}

TEST(Codec, JudgmentRoundTripAndDefaults) {
  RecordJudgment j = blank("r1");
  j.anxiety_instances = 2;
  j.anxiety_free = false;
  j.rationales["safety"] = "fine";
  EXPECT_EQ(Json(j).get<RecordJudgment>(), j);
  Json doc = Json(j);
  doc.erase("anxiety_free");
  EXPECT_FALSE(doc.get<RecordJudgment>().anxiety_free);
}

TEST(Judge, ViewIsBlind) {
  SessionRecord r = memory_record();
  r.profile.depression_comorbid = true;
  std::set<std::string> keys;
  collect_keys(judged_view(r), keys);
  for (const char* banned : {"method", "condition", "impairment", "depression_comorbid", "target_domain", "profile_id",
                             "simulator", "severity"}) {
    EXPECT_FALSE(keys.count(banned)) << banned;
  }
}

TEST(Judge, RequestsCarryNoMethodOrCondition) {
  const SessionRecord r = memory_record();
  auto routed = std::make_shared<RoutedScriptProvider>(synthetic());
  auto gw = quick_gateway(routed);
  Judge judge(*gw);
  (void)judge.judge_record(r, r.target_domain);
  for (const auto& req : routed->requests()) {
    std::set<std::string> keys;
    collect_keys(parse_json(req.messages.front().text), keys);
    EXPECT_FALSE(keys.count("method"));
    EXPECT_FALSE(keys.count("condition"));
    EXPECT_FALSE(keys.count("impairment"));
    if (req.schema_id == kDomainsId) EXPECT_FALSE(keys.count("target_domain"));
  }
}

TEST(Judge, ThreePhaseMemorySessionScoresFullMarks) {
  const SessionRecord r = memory_record();
  auto routed = std::make_shared<RoutedScriptProvider>(synthetic());
  routed->push_json(kRubricId, rubric_doc(5));
  auto gw = quick_gateway(routed);
  Judge judge(*gw);
  const auto j = judge.judge_record(r, CognitiveDomain::memory);
  EXPECT_EQ(j.helpfulness, 5);
  EXPECT_EQ(j.da, 1);
  EXPECT_TRUE(j.safe);
  EXPECT_TRUE(j.anxiety_free);
}

TEST(Judge, FailureExcludesTheRecord) {
  const SessionRecord r = memory_record();
  SessionRecord other = r;
  other.session_id = "other";
  auto routed = std::make_shared<RoutedScriptProvider>(synthetic());
  for (int i = 0; i < 4; ++i) routed->push(kDomainsId, "{}");
  auto gw = quick_gateway(routed);
  Judge judge(*gw);
  const auto run = evaluate_records({r, other}, judge, 1);
  EXPECT_EQ(run.failed_records.size(), 1u);
  EXPECT_EQ(run.judgments.size(), 1u);
  EXPECT_EQ(run.report.excluded, 1);
  EXPECT_EQ(run.report.n_records, 1);
}

TEST(Judge, EvaluatorEqualToGameModelStillJudges) {
  const SessionRecord r = memory_record();
  auto gw = quick_gateway(synthetic());
  Judge judge(*gw, ModelConfig::evaluator(), ModelConfig::evaluator().model_name);
  EXPECT_NO_THROW((void)judge.judge_record(r, r.target_domain));
}
