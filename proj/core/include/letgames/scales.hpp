// SPDX-License-Identifier: Apache-2.0
//
// Text-adapted screening scales used to check simulator fidelity.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "letgames/domain.hpp"
#include "letgames/patient_sim.hpp"

namespace letgames {

enum class ScaleKind { moca_blind, mmse };
template <>
struct EnumNames<ScaleKind> {
  static constexpr std::array<std::pair<ScaleKind, std::string_view>, 2> values{
      {{ScaleKind::moca_blind, "moca_blind"}, {ScaleKind::mmse, "mmse"}}};
};

inline constexpr int kMmseMax = 19;
inline constexpr int kMmseHealthyThreshold = 16;
inline constexpr int kMocaBlindMax = 16;
inline constexpr int kMocaBlindHealthyThreshold = 13;

struct ScaleItem {
  std::string id;
  std::string prompt;
  // Each slot is one scorable element; any listed phrase (whole-word,
  // case-insensitive) in the answer earns it.
  std::vector<std::vector<std::string>> slots;
  // Points for 0..slots.size() slots earned; empty means one point per slot.
  std::vector<int> credit_table;

  int max_points() const;
  /// Key-deterministic credit for `answer`.
  int score(std::string_view answer) const;
};

struct ScaleBank {
  ScaleKind kind = ScaleKind::mmse;
  std::string preamble;
  std::vector<ScaleItem> items;
  int max_score = 0;
  int healthy_threshold = 0;

  /// Throws Error(parse_error) when item maxima do not add up to the stated maximum.
  static ScaleBank from_json(const Json& j);
  static ScaleBank load(const std::filesystem::path& path);
};

struct ScaleResult {
  ScaleKind scale = ScaleKind::mmse;
  int score = 0;
  int max = 0;
  bool passes_healthy_threshold = false;
  std::vector<int> item_scores;
  std::vector<std::string> answers;
};

Json encode_scale_result(const ScaleResult& r);

int healthy_threshold(ScaleKind kind);
int scale_max(ScaleKind kind);

/// Pass/fail of a single score or a group mean against the healthy threshold.
bool passes_threshold(ScaleKind kind, double score);

/// Scores one answer per item, in item order. Throws INVALID_ARGUMENT on a count mismatch.
ScaleResult score_answers(const ScaleBank& bank, const std::vector<std::string>& answers);

/// Runs the item dialogue through the simulator and scores it. Throws SIM_FAILED.
ScaleResult administer_scale(const PatientProfile& profile, const ScaleBank& bank, const PatientSimulator& simulator);

}  // namespace letgames
