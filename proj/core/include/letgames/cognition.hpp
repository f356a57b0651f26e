// SPDX-License-Identifier: Apache-2.0
//
// Cognition Tracker: post-session scoring, longitudinal store and the
// score-driven difficulty step.
#pragma once

#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

#include "letgames/domain.hpp"
#include "letgames/llm.hpp"
#include "letgames/psychology.hpp"

namespace letgames {

inline constexpr int kRaiseAtScore = 85;
inline constexpr int kLowerBelowScore = 70;

/// >= 85 raises the level, < 70 lowers it, otherwise it holds; always within [1, 5].
int step_difficulty(int ct_score, int current);

/// Score driving the difficulty step: the target domain's score (0 when absent).
int ct_score(const CognitionReport& report);

/// Unsuccessful judged turns over all judged turns of the record; 0 with no turns.
double failure_rate(const SessionRecord& record);

class CognitionTracker {
 public:
  explicit CognitionTracker(LlmGateway& gateway, PsychologyPolicy policy = {},
                            ModelConfig config = ModelConfig::game_agent());

  /// Throws TRACKING_FAILED for a record without turns or when the model gives
  /// no valid report.
  CognitionReport score_session(const SessionRecord& record, const std::vector<CognitionReport>& history = {}) const;

 private:
  LlmGateway& gateway_;
  PsychologyPolicy policy_;
  ModelConfig config_;
};

/// Per-profile JSONL of CognitionReports under `<root>/reports/`.
class LongitudinalStore {
 public:
  explicit LongitudinalStore(std::filesystem::path root);

  void append(const CognitionReport& report);
  std::vector<CognitionReport> load(const std::string& profile_id) const;

 private:
  std::filesystem::path file_for(const std::string& profile_id) const;

  std::filesystem::path root_;
  mutable std::mutex mu_;
};

/// Plain-text table: session, domain, CT score, level played, next level.
std::string render_trajectory(const std::vector<CognitionReport>& reports);

}  // namespace letgames
