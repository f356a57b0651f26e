// SPDX-License-Identifier: Apache-2.0
//
// Evaluation protocol: blind judging of session records, the eleven metrics,
// subgroup normalization and the report formats.
#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "letgames/domain.hpp"
#include "letgames/llm.hpp"

namespace letgames {

struct RecordJudgment {
  std::string record_id;
  std::string evaluator;
  int helpfulness = 0;
  std::vector<CognitiveDomain> inferred_domains;
  int da = 0;
  bool safe = true;
  std::vector<std::string> risk_behaviors;
  int hints_required = 0;
  int hints_provided = 0;
  bool anxiety_free = true;
  int anxiety_instances = 0;
  int alleviation_attempts = 0;
  int easiness = 0;
  int coherence = 0;
  int personalization = 0;
  int enjoyment = 0;
  int willingness = 0;
  std::map<std::string, std::string> rationales;

  bool operator==(const RecordJudgment&) const = default;
};

void to_json(Json& j, const RecordJudgment& v);
void from_json(const Json& j, RecordJudgment& v);

/// Subgroup membership of a judged record.
struct RecordMeta {
  std::string record_id;
  CognitiveDomain target_domain = CognitiveDomain::memory;
  AgeGroup age_group = AgeGroup::senior;

  std::string subgroup() const;
};

RecordMeta record_meta(const SessionRecord& record);

/// Harmonic mean of set precision and recall; 0 for an empty prediction.
/// Throws EMPTY_TARGET.
double set_f1(const std::vector<CognitiveDomain>& target, const std::vector<CognitiveDomain>& predicted);

/// Metric names in report column order.
inline constexpr std::array<std::string_view, 11> kMetricNames{"Help", "DoAl", "Safe", "NeHi", "Anxi", "Alle",
                                                               "Easy", "Cohe", "Pers", "Enjo", "Will"};

struct MetricValue {
  std::string name;
  bool rate = false;              // [0,1] ratio; otherwise a 0-5 scale mean
  std::optional<double> value;    // nullopt = n/a
  std::map<std::string, std::optional<double>> per_subgroup;
  std::optional<double> normalized_macro;
};

struct MetricReport {
  std::vector<MetricValue> metrics;  // kMetricNames order
  int n_records = 0;
  int excluded = 0;  // records the judge could not score

  const MetricValue& get(std::string_view name) const;
  Json to_json() const;
};

struct ScoreObservation {
  std::string evaluator;
  std::string subgroup;
  double value = 0.0;
};

struct NormalizationResult {
  std::vector<double> normalized;  // input order
  std::map<std::string, double> subgroup_means;
  double macro = 0.0;
};

/// Per (evaluator, subgroup): z-score with the evaluator's own mean and
/// population SD, then map onto the subgroup's pooled mean and SD and clip to
/// [lo, hi]. A zero evaluator SD passes values through. Then subgroup means
/// and their macro average.
NormalizationResult normalize_scores(const std::vector<ScoreObservation>& obs, double lo, double hi);

/// Throws EMPTY_INPUT for no judgments and INVALID_ARGUMENT when a judgment has no meta.
MetricReport compute_metrics(const std::vector<RecordJudgment>& judgments, const std::vector<RecordMeta>& metas);

/// Fixed-width table in metric column order (rates as percentages).
std::string render_metric_table(const MetricReport& report);

/// What the judge sees: the game and the play, with method, condition and the
/// target stripped.
Json judged_view(const SessionRecord& record);

class Judge {
 public:
  explicit Judge(LlmGateway& gateway, ModelConfig config = ModelConfig::evaluator(),
                 std::optional<std::string> game_model = std::nullopt);

  /// Domains first (without the target), then the rubric. Throws JUDGE_FAILED.
  RecordJudgment judge_record(const SessionRecord& record, CognitiveDomain target) const;

  const std::string& evaluator_name() const { return config_.model_name; }

 private:
  LlmGateway& gateway_;
  ModelConfig config_;
};

struct EvaluationRun {
  MetricReport report;
  std::vector<RecordJudgment> judgments;
  std::vector<std::string> failed_records;
};

/// Judges every record (up to `parallelism` at a time) and aggregates.
/// Records the judge fails on are excluded and counted.
EvaluationRun evaluate_records(const std::vector<SessionRecord>& records, const Judge& judge, int parallelism = 4);

}  // namespace letgames
