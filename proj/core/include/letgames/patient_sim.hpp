// SPDX-License-Identifier: Apache-2.0
//
// Participant layer of the evaluation protocol: cohort construction,
// model-backed player simulation, and a human input adapter with the same
// contract.
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "letgames/domain.hpp"
#include "letgames/llm.hpp"

namespace letgames {

struct CohortSpec {
  std::vector<PatientProfile> base_profiles;
  std::vector<CognitiveDomain> domains = all_domains();
  double depression_rate = 0.30;
  int controls_per_kind = 1;  // healthy copies per base profile
  std::uint64_t rng_seed = 42;
  Severity severity = Severity::moderate;
};

struct Cohort {
  std::vector<PatientProfile> sps;
  std::vector<PatientProfile> controls;
};

/// Description and daily impact for a simulated impairment.
Impairment impairment_template(CognitiveDomain domain, Severity severity);

/// base x domains simulated patients with exactly round(rate * N) depression
/// flags chosen by a seeded shuffle, plus healthy controls. Deterministic.
Cohort build_cohort(const CohortSpec& spec);

/// Base demographic profiles: a JSON array of {id, name, age, gender, occupation, life_experience}.
std::vector<PatientProfile> load_profiles(const std::filesystem::path& path);

/// Cohort files hold {"sps": [...], "controls": [...]} or a bare profile array.
Cohort load_cohort(const std::filesystem::path& path);
void save_cohort(const std::filesystem::path& path, const Cohort& cohort);

/// Think-time model: log-normal around a per-kind median, truncated to [lo, hi].
struct LatencyModel {
  double median_healthy = 6.0;
  double median_impaired = 14.0;
  double sigma = 0.5;
  double lo = 1.0;
  double hi = 60.0;

  double sample(const PatientProfile& profile, std::uint64_t seed) const;
};

struct SimTurn {
  std::string action;
  double declared_latency_seconds = 0.0;
};

/// One exchange of the player's (blurry) memory of the session.
struct SimExchange {
  std::string game;
  std::string player;
};

/// Player-facing text of a controller output.
std::string render_for_player(const TurnOutput& out);

/// System prompt for `profile` with the persona fields filled in.
std::string simulator_prompt(const PatientProfile& profile);

class PatientSimulator {
 public:
  explicit PatientSimulator(LlmGateway& gateway, std::uint64_t seed = 0, ModelConfig config = ModelConfig::game_agent(),
                            LatencyModel latency = {});

  /// First-person action for the game's latest message. An empty message gets
  /// a clarifying question without a model call. Throws SIM_FAILED.
  SimTurn simulate_turn(const PatientProfile& profile, std::string_view game_output,
                        const std::vector<SimExchange>& history, bool is_question_moment = false) const;
  SimTurn simulate_turn(const PatientProfile& profile, const TurnOutput& game_output,
                        const std::vector<SimExchange>& history) const;

 private:
  LlmGateway& gateway_;
  std::uint64_t seed_;
  ModelConfig config_;
  LatencyModel latency_;
};

/// Forwards typed input with measured think-time. Blank lines re-prompt
/// without consuming a turn; a closed channel throws CHANNEL_CLOSED.
class HumanAdapter {
 public:
  using ReadLine = std::function<std::optional<std::string>()>;
  using Clock = std::function<double()>;  // seconds
  using Reprompt = std::function<void()>;

  explicit HumanAdapter(ReadLine read_line, Clock clock = {}, Reprompt reprompt = {});

  SimTurn next();

 private:
  ReadLine read_line_;
  Clock clock_;
  Reprompt reprompt_;
};

/// FNV-1a over the parts, for seeding per-turn randomness reproducibly.
std::uint64_t stable_hash(std::initializer_list<std::string_view> parts, std::uint64_t seed = 0);

}  // namespace letgames
