// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <random>

#include "letgames/critic.hpp"
#include "letgames/eval.hpp"
#include "letgames/logging.hpp"
#include "letgames/psychology.hpp"
#include "letgames/reliability.hpp"
#include "letgames/session.hpp"
#include "test_support.hpp"

using namespace letgames;
using namespace letgames::testing;

namespace {

void BM_HintGate(benchmark::State& state) {
  HintContext ctx{25.0, 2, 40.0, false, false, EmotionState::confused};
  for (auto _ : state) {
    ctx.consecutive_failures = (ctx.consecutive_failures + 1) % 5;
    benchmark::DoNotOptimize(hint_gate(ctx));
  }
}
BENCHMARK(BM_HintGate);

void BM_ValidateSpec(benchmark::State& state) {
  const GameSpec spec = memory_spec();
  for (auto _ : state) benchmark::DoNotOptimize(validate_spec(spec, CognitiveDomain::memory, "Margaret Lee"));
}
BENCHMARK(BM_ValidateSpec);

void BM_RuleCritic(benchmark::State& state) {
  const auto out = plain_turn("Uncle Zhang waves from the stall while Aunt Li counts apples.",
                              {"Walk to the bakery", "Ask Aunt Li about the price", "Look around"});
  CriticContext ctx;
  ctx.phase = Phase::encoding;
  ctx.npcs_present = {"Aunt Li"};
  ctx.declared_npcs = {"Aunt Li", "Uncle Zhang"};
  ctx.recent_actions = {"look around"};
  for (auto _ : state) benchmark::DoNotOptimize(rule_issues(out, ctx));
}
BENCHMARK(BM_RuleCritic);

void BM_ComputeMetrics(benchmark::State& state) {
  const Json corpus = read_fixture(fixture_path("judged_corpus_20.json"));
  std::vector<RecordJudgment> js;
  std::vector<RecordMeta> metas;
  for (const auto& r : corpus.at("judgments")) js.push_back(r.get<RecordJudgment>());
  for (const auto& m : corpus.at("metas")) {
    metas.push_back({m.at("record_id").get<std::string>(), decode<CognitiveDomain>(m.at("target_domain")),
                     m.at("age_group") == "senior" ? AgeGroup::senior : AgeGroup::non_senior});
  }
  for (auto _ : state) benchmark::DoNotOptimize(compute_metrics(js, metas));
}
BENCHMARK(BM_ComputeMetrics);

void BM_KrippendorffAlpha(benchmark::State& state) {
  std::mt19937 rng(3);
  const auto items = static_cast<std::size_t>(state.range(0));
  std::vector<std::vector<std::optional<double>>> m(4, std::vector<std::optional<double>>(items));
  for (auto& row : m) {
    for (auto& cell : row) cell = static_cast<double>(rng() % 5);
  }
  for (auto _ : state) benchmark::DoNotOptimize(krippendorff_alpha(m, MeasurementLevel::interval));
}
BENCHMARK(BM_KrippendorffAlpha)->Arg(20)->Arg(200)->Arg(2000);

void BM_SyntheticSession(benchmark::State& state) {
  auto gw = quick_gateway(synthetic());
  TempDir dir;
  SessionConfig cfg;
  cfg.data_dir = dir.path();
  cfg.id_nonce = 1;
  SessionService svc(*gw, cfg);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        svc.simulate_batch({{impaired_profile(CognitiveDomain::memory, Severity::moderate), CognitiveDomain::memory}},
                           Method::letgames, ++seed));
  }
}
BENCHMARK(BM_SyntheticSession)->Unit(benchmark::kMillisecond);

}  // namespace

int main(int argc, char** argv) {
  letgames::configure_logging("off");
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
