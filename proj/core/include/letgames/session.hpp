// SPDX-License-Identifier: Apache-2.0
//
// Session lifecycle: design, the per-turn pipeline (controller and critic,
// emotion, hint, reset), write-ahead journaling, resume and batch simulation.
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "letgames/archive.hpp"
#include "letgames/cognition.hpp"
#include "letgames/domain.hpp"
#include "letgames/game_master.hpp"
#include "letgames/llm.hpp"
#include "letgames/patient_sim.hpp"
#include "letgames/psychology.hpp"
#include "letgames/reme.hpp"

namespace letgames {

enum class SessionMode { interactive, batch };
enum class SessionStatus { designing, awaiting_action, intervening, ended };

template <>
struct EnumNames<SessionMode> {
  static constexpr std::array<std::pair<SessionMode, std::string_view>, 2> values{
      {{SessionMode::interactive, "interactive"}, {SessionMode::batch, "batch"}}};
};
template <>
struct EnumNames<SessionStatus> {
  static constexpr std::array<std::pair<SessionStatus, std::string_view>, 4> values{
      {{SessionStatus::designing, "designing"},
       {SessionStatus::awaiting_action, "awaiting_action"},
       {SessionStatus::intervening, "intervening"},
       {SessionStatus::ended, "ended"}}};
};

struct SessionConfig {
  std::filesystem::path data_dir = "letgames-data";
  int turn_cap = 40;
  int max_resets = 2;  // a further reset request ends the session
  int recent_window = 3;
  PsychologyPolicy policy;
  GameMasterConfig game_master;
  ModelConfig agent_model = ModelConfig::game_agent();
  RemeCandidates reme_candidates;
  std::uint64_t id_nonce = 0;  // 0 = random per service instance
  std::function<std::string()> now;  // ISO-8601 timestamps; defaults to the UTC clock

  /// LETGAMES_DATA_DIR when set, otherwise `fallback`.
  static std::filesystem::path data_dir_from_env(const std::filesystem::path& fallback = "letgames-data");
};

struct SessionHandle {
  std::string session_id;
  SessionMode mode = SessionMode::interactive;
  SessionStatus status = SessionStatus::designing;
  GameState state;
};

/// What one submitted action produced.
struct TurnResult {
  std::string session_id;
  int turn_index = 0;
  TurnOutput turn;
  std::optional<Hint> hint;
  std::optional<EmotionAssessment> intervention;  // set when support text is shown
  bool ended = false;
  std::optional<Termination> termination;
  std::optional<GameSpec> new_spec;  // the easier game after a reset
  std::optional<TurnOutput> new_opening;
  SessionStatus status = SessionStatus::awaiting_action;

  Json to_json() const;
  static TurnResult from_json(const Json& j);
};

/// One batch session to run.
struct BatchJob {
  PatientProfile profile;
  CognitiveDomain domain = CognitiveDomain::memory;
};

/// Simulated patients play their impaired domain; healthy controls cycle
/// through `domains` in order.
std::vector<BatchJob> batch_jobs(const Cohort& cohort, const std::vector<CognitiveDomain>& domains);

/// True for an explicit request to stop playing ("quit", "exit", "stop").
bool is_quit(std::string_view action);

/// Self-corrections in a player action ("no, wait", "actually", "I mean").
bool is_self_correction(std::string_view action);

class SessionService {
 public:
  SessionService(LlmGateway& gateway, SessionConfig config);

  /// Throws INVALID_ARGUMENT for an unusable profile and DESIGN_FAILED.
  std::pair<SessionHandle, TurnOutput> create_session(const PatientProfile& profile, CognitiveDomain domain,
                                                      Method method, std::uint64_t seed = 0,
                                                      SessionMode mode = SessionMode::interactive);

  /// Runs the turn pipeline and journals the turn before returning. A repeated
  /// idempotency key returns the stored result without a new turn. Throws
  /// NOT_FOUND, SESSION_ENDED and CONTROL_FAILED.
  TurnResult submit_action(const std::string& session_id, const std::string& action, double latency_seconds,
                           const std::string& idempotency_key = "");

  /// Loads the session from its journal when it is not in memory. Throws NOT_FOUND.
  SessionHandle get_session(const std::string& session_id);
  SessionRecord record(const std::string& session_id);
  /// API view of the session; the ReMe target stays hidden until the game ends.
  Json session_view(const std::string& session_id);
  /// Tracker report of an ended session (nullopt while running or when tracking failed).
  std::optional<CognitionReport> report(const std::string& session_id);

  /// Ends a running session early with `how`. Throws NOT_FOUND.
  SessionRecord abort_session(const std::string& session_id, Termination how);

  /// Plays each job to the end with the simulator. Every job yields one
  /// terminated record, in job order.
  std::vector<SessionRecord> simulate_batch(const std::vector<BatchJob>& jobs, Method method, std::uint64_t seed,
                                            int parallelism = 1);

  SessionArchive& archive() { return archive_; }
  LongitudinalStore& longitudinal() { return store_; }
  const SessionConfig& config() const { return config_; }

 private:
  struct Live;
  std::shared_ptr<Live> find(const std::string& session_id);
  std::shared_ptr<Live> resume(const std::string& session_id);
  std::string next_id(const PatientProfile& profile, std::uint64_t seed);
  std::string timestamp() const;
  TurnResult letgames_turn(Live& s, const std::string& action, double latency, const std::string& key);
  TurnResult reme_turn(Live& s, const std::string& action, double latency, const std::string& key);
  void finish(Live& s, Termination how);
  SessionRecord play_to_end(const BatchJob& job, Method method, std::uint64_t seed);

  LlmGateway& gateway_;
  SessionConfig config_;
  GameMaster game_master_;
  PsychologyMaster psychology_;
  CognitionTracker tracker_;
  RemeEngine reme_;
  SessionArchive archive_;
  LongitudinalStore store_;
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<Live>> live_;
  std::uint64_t counter_ = 0;
};

}  // namespace letgames
