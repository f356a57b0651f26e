// SPDX-License-Identifier: Apache-2.0
#include "letgames/session.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <random>
#include <thread>

#include <spdlog/spdlog.h>

#include "letgames/codec.hpp"
#include "letgames/state.hpp"
#include "letgames/text.hpp"

namespace letgames {

std::filesystem::path SessionConfig::data_dir_from_env(const std::filesystem::path& fallback) {
  if (const char* v = std::getenv("LETGAMES_DATA_DIR"); v != nullptr && *v != '\0') return v;
  return fallback;
}

Json TurnResult::to_json() const {
  return Json{{"session_id", session_id},
              {"turn_index", turn_index},
              {"turn", encode(turn)},
              {"hint", hint ? encode(*hint) : Json(nullptr)},
              {"intervention", intervention ? encode(*intervention) : Json(nullptr)},
              {"ended", ended},
              {"termination", termination ? encode(*termination) : Json(nullptr)},
              {"new_spec", new_spec ? encode(*new_spec) : Json(nullptr)},
              {"new_opening", new_opening ? encode(*new_opening) : Json(nullptr)},
              {"status", enum_name(status)}};
}

TurnResult TurnResult::from_json(const Json& j) {
  TurnResult r;
  r.session_id = j.at("session_id").get<std::string>();
  r.turn_index = j.value("turn_index", 0);
  r.turn = decode<TurnOutput>(j.at("turn"));
  if (j.contains("hint") && !j["hint"].is_null()) r.hint = decode<Hint>(j["hint"]);
  if (j.contains("intervention") && !j["intervention"].is_null()) {
    r.intervention = decode<EmotionAssessment>(j["intervention"]);
  }
  r.ended = j.value("ended", false);
  if (j.contains("termination") && !j["termination"].is_null()) r.termination = decode<Termination>(j["termination"]);
  if (j.contains("new_spec") && !j["new_spec"].is_null()) r.new_spec = decode<GameSpec>(j["new_spec"]);
  if (j.contains("new_opening") && !j["new_opening"].is_null()) r.new_opening = decode<TurnOutput>(j["new_opening"]);
  r.status = enum_require<SessionStatus>(j.value("status", "awaiting_action"), "session status");
  return r;
}

std::vector<BatchJob> batch_jobs(const Cohort& cohort, const std::vector<CognitiveDomain>& domains) {
  if (domains.empty()) throw Error(ErrorCode::invalid_argument, "no domains for healthy controls");
  std::vector<BatchJob> jobs;
  for (const auto& p : cohort.sps) {
    jobs.push_back({p, p.impairment ? p.impairment->domain : domains.front()});
  }
  for (std::size_t i = 0; i < cohort.controls.size(); ++i) {
    jobs.push_back({cohort.controls[i], domains[i % domains.size()]});
  }
  return jobs;
}

bool is_quit(std::string_view action) {
  const auto w = text::words(action);
  if (w.size() != 1) return false;
  return w[0] == "quit" || w[0] == "exit" || w[0] == "stop";
}

bool is_self_correction(std::string_view action) {
  const std::string a = text::trim(action);
  return text::starts_with_ci(a, "no, wait") || text::starts_with_ci(a, "wait,") ||
         text::starts_with_ci(a, "actually") || text::starts_with_ci(a, "sorry,") || text::mentions_ci(a, "i mean");
}

namespace {

struct GameReplay {
  GameState state;
  std::vector<AttemptEvent> attempts;
  std::size_t first_turn = 0;  // index of the current game's first turn in the record
};

std::size_t current_game_start(const SessionRecord& r) {
  std::size_t start = 0;
  for (std::size_t i = 0; i < r.turns.size(); ++i) {
    if (r.turns[i].reset) start = i + 1;
  }
  return start;
}

std::string attempt_task(const GameState& before, const TurnOutput& out) {
  return out.task_update ? out.task_update->task_id : before.task.active_sub_task_id;
}

GameReplay replay_current_game(const SessionRecord& r) {
  GameReplay g;
  g.first_turn = current_game_start(r);
  if (!r.spec) return g;
  g.state = initial_state(*r.spec);
  if (r.opening) g.state = apply_opening(g.state, *r.opening);
  for (std::size_t i = g.first_turn; i < r.turns.size(); ++i) {
    const auto& t = r.turns[i];
    g.attempts.push_back({attempt_task(g.state, t.turn_output), !t.turn_output.is_action_successful,
                          t.hint ? std::optional<HintLevel>(t.hint->level) : std::nullopt});
    g.state = apply_turn(g.state, t.player_action, t.turn_output);
  }
  return g;
}

bool made_progress(const GameState& before, const TurnOutput& out) {
  if (!out.task_update) return false;
  if (out.task_update->status == TaskStatus::completed) return true;
  for (const auto& t : before.task.sub_tasks) {
    if (t.task_id == out.task_update->task_id) return out.task_update->progress > t.progress;
  }
  return false;
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json reme_item_json(const RemeItem& item) {
  return Json{{"name", item.name}, {"synonyms", item.synonyms}, {"features", item.features}};
}

TurnOutput reme_output(const RemeGame& game, std::string text, bool successful) {
  TurnOutput out;
  out.narrative = std::move(text);
  out.current_situation = "Guessing game, category: " + game.category;
  out.current_goal = "Find the hidden object by asking yes or no questions";
  out.is_question_moment = true;
  out.is_action_successful = successful;
  return out;
}

}  // namespace

struct SessionService::Live {
  std::mutex mu;
  SessionRecord record;
  SessionMode mode = SessionMode::interactive;
  SessionStatus status = SessionStatus::designing;
  GameState state;
  std::optional<RemeGame> reme;
  std::string last_key;
  Json last_response = nullptr;
};

SessionService::SessionService(LlmGateway& gateway, SessionConfig config)
    : gateway_(gateway),
      config_(std::move(config)),
      game_master_(gateway, config_.game_master),
      psychology_(gateway, config_.policy, config_.agent_model),
      tracker_(gateway, config_.policy, config_.agent_model),
      reme_(gateway, config_.agent_model),
      archive_(config_.data_dir),
      store_(config_.data_dir) {
  if (config_.id_nonce == 0) config_.id_nonce = std::random_device{}() | (std::uint64_t{std::random_device{}()} << 32);
  if (!config_.now) config_.now = utc_now;
}

std::string SessionService::timestamp() const { return config_.now(); }

std::string SessionService::next_id(const PatientProfile& profile, std::uint64_t seed) {
  for (;;) {
    const auto n = counter_++;
    const auto h = stable_hash({profile.id, std::to_string(seed), std::to_string(n)}, config_.id_nonce);
    char buf[24];
    std::snprintf(buf, sizeof buf, "s%016llx", static_cast<unsigned long long>(h));
    std::string id = buf;
    if (!live_.count(id) && !std::filesystem::exists(archive_.journal_file(id))) return id;
  }
}

std::pair<SessionHandle, TurnOutput> SessionService::create_session(const PatientProfile& profile,
                                                                    CognitiveDomain domain, Method method,
                                                                    std::uint64_t seed, SessionMode mode) {
  if (text::trim(profile.name).empty() || profile.age <= 0) {
    throw Error(ErrorCode::invalid_argument, "profile needs a name and a positive age");
  }
  auto s = std::make_shared<Live>();
  s->mode = mode;
  auto& r = s->record;
  {
    std::lock_guard lock(mu_);
    r.session_id = next_id(profile, seed);
    live_[r.session_id] = s;
  }
  std::lock_guard lock(s->mu);
  r.profile = profile;
  r.profile_id = profile.id.empty() ? safe_file_stem(profile.name) : profile.id;
  r.profile.id = r.profile_id;
  r.target_domain = domain;
  r.method = method;
  r.started_at = timestamp();
  Json meta{{"mode", enum_name(mode)}, {"seed", seed}};

  try {
    if (method == Method::letgames) {
      const auto history = store_.load(r.profile_id);
      const DifficultyBand band =
          history.empty() ? band_for(Band::balanced) : select_design_band(history.back().failure_rate);
      const int level = history.empty() ? 3 : history.back().next_difficulty;
      GameSpec spec = game_master_.design_game(domain, r.profile, band, level);
      GameState st = initial_state(spec);
      const RefineResult opening = game_master_.opening(spec, st);
      s->state = apply_opening(st, opening.output);
      r.spec = std::move(spec);
      r.opening = opening.output;
      meta["band"] = enum_name(band.band);
    } else {
      RemeGame game = reme_start(config_.reme_candidates, seed);
      r.reme = RemeDescriptor{game.category, game.target.name};
      r.opening = reme_output(game, reme_opening(game), true);
      meta["reme_item"] = reme_item_json(game.target);
      s->reme = std::move(game);
    }
  } catch (...) {
    std::lock_guard map_lock(mu_);
    live_.erase(r.session_id);
    throw;
  }
  archive_.created(r, meta);
  s->status = SessionStatus::awaiting_action;
  spdlog::info("[session] {} created ({} / {})", r.session_id, enum_name(method), enum_name(domain));
  return {SessionHandle{r.session_id, mode, s->status, s->state}, *r.opening};
}

std::shared_ptr<SessionService::Live> SessionService::find(const std::string& session_id) {
  {
    std::lock_guard lock(mu_);
    if (auto it = live_.find(session_id); it != live_.end()) return it->second;
  }
  return resume(session_id);
}

std::shared_ptr<SessionService::Live> SessionService::resume(const std::string& session_id) {
  if (safe_file_stem(session_id) != session_id) {
    throw Error(ErrorCode::not_found, "no session " + session_id);
  }
  auto replay = archive_.load(session_id);
  if (!replay) throw Error(ErrorCode::not_found, "no session " + session_id);
  auto s = std::make_shared<Live>();
  s->record = std::move(replay->record);
  s->mode = enum_parse<SessionMode>(replay->meta.value("mode", "interactive")).value_or(SessionMode::interactive);
  s->last_key = replay->last_idempotency_key;
  s->last_response = replay->last_response;
  const auto& r = s->record;
  if (r.spec) s->state = replay_current_game(r).state;
  if (r.reme) {
    RemeGame game;
    game.category = r.reme->category;
    if (replay->meta.contains("reme_item")) {
      const auto& it = replay->meta["reme_item"];
      game.target.name = it.value("name", r.reme->target);
      game.target.synonyms = it.value("synonyms", std::vector<std::string>{});
      game.target.features = it.value("features", std::vector<std::string>{});
    } else {
      game.target.name = r.reme->target;
    }
    for (const auto& t : r.turns) {
      const auto& ex = t.turn_output.extra;
      game.history.push_back({t.player_action, ex.value("reme_answer", t.turn_output.narrative)});
      if (ex.value("reme_kind", "") == "solved") game.solved = true;
    }
    game.ended = r.terminated.has_value();
    s->reme = std::move(game);
  }
  if (r.terminated) {
    s->status = SessionStatus::ended;
  } else if (!r.turns.empty() && r.turns.back().emotion &&
             r.turns.back().emotion->intervention == InterventionType::intensive) {
    s->status = SessionStatus::intervening;
  } else {
    s->status = SessionStatus::awaiting_action;
  }
  std::lock_guard lock(mu_);
  auto [it, inserted] = live_.emplace(session_id, s);
  if (inserted) spdlog::info("[session] {} resumed from its journal ({} turns)", session_id, r.turns.size());
  return it->second;
}

TurnResult SessionService::submit_action(const std::string& session_id, const std::string& action,
                                         double latency_seconds, const std::string& idempotency_key) {
  auto s = find(session_id);
  std::lock_guard lock(s->mu);
  if (!idempotency_key.empty() && idempotency_key == s->last_key && !s->last_response.is_null()) {
    return TurnResult::from_json(s->last_response);
  }
  if (s->status == SessionStatus::ended) throw Error(ErrorCode::session_ended, "session " + session_id + " has ended");
  if (latency_seconds < 0.0) throw Error(ErrorCode::invalid_argument, "latency must be non-negative");

  TurnResult r;
  if (is_quit(action)) {
    finish(*s, Termination::abandoned);
    r.session_id = session_id;
    r.turn_index = static_cast<int>(s->record.turns.size());
    r.turn.narrative = "Thank you for playing. See you next time!";
    r.ended = true;
    r.termination = Termination::abandoned;
    r.status = SessionStatus::ended;
  } else if (s->reme) {
    r = reme_turn(*s, action, latency_seconds, idempotency_key);
  } else {
    r = letgames_turn(*s, action, latency_seconds, idempotency_key);
  }
  s->last_key = idempotency_key;
  s->last_response = r.to_json();
  return r;
}

TurnResult SessionService::letgames_turn(Live& s, const std::string& action, double latency, const std::string& key) {
  auto& rec = s.record;
  const GameState before = s.state;
  const RefineResult step = game_master_.refined_step(*rec.spec, before, action);
  GameState after;
  try {
    after = apply_turn(before, action, step.output);
  } catch (const Error& e) {
    throw Error(ErrorCode::control_failed, std::string("turn could not be applied: ") + e.what());
  }

  TurnRecord tr;
  tr.player_action = action;
  tr.turn_output = step.output;
  tr.wall_clock_latency = latency;
  tr.refine_attempts = step.attempts;
  tr.approved = step.approved;

  // Emotion features over the whole session including this turn.
  std::vector<const TurnRecord*> all;
  for (const auto& t : rec.turns) all.push_back(&t);
  all.push_back(&tr);
  const std::size_t game_start = current_game_start(rec);
  auto success_share = [](auto first, auto last) {
    const auto n = std::distance(first, last);
    if (n == 0) return 1.0;
    const auto ok = std::count_if(first, last, [](const TurnRecord* t) { return t->turn_output.is_action_successful; });
    return static_cast<double>(ok) / static_cast<double>(n);
  };
  EmotionFeatures f;
  f.success_rate = success_share(all.begin(), all.end());
  const auto window = std::min<std::size_t>(all.size(), static_cast<std::size_t>(std::max(1, config_.recent_window)));
  f.recent_success_rate = success_share(all.end() - static_cast<std::ptrdiff_t>(window), all.end());
  double since_break = 0.0;
  for (const auto* t : all) {
    if (t->hint) ++f.hint_usage_count;
    f.game_duration_minutes += t->wall_clock_latency / 60.0;
    since_break += t->wall_clock_latency / 60.0;
    if (t->emotion && t->emotion->intervention == InterventionType::rest_suggestion) since_break = 0.0;
    if (is_self_correction(t->player_action)) ++f.undo_count;
  }
  f.minutes_since_break = since_break;
  f.response_latency_seconds = latency;
  for (std::size_t i = all.size(); i > game_start; --i) {
    if (all[i - 1]->turn_output.is_action_successful) break;
    ++f.consecutive_failures;
  }
  std::optional<EmotionState> previous;
  for (const auto& t : rec.turns) {
    if (t.emotion) previous = t.emotion->state;
  }
  Json window_json = Json::array();
  for (std::size_t i = all.size() - window; i < all.size(); ++i) {
    window_json.push_back({{"player", all[i]->player_action},
                           {"game", all[i]->turn_output.narrative},
                           {"successful", all[i]->turn_output.is_action_successful}});
  }
  tr.emotion = psychology_.assess_emotion(f, previous, window_json);

  TurnResult res;
  res.session_id = rec.session_id;
  res.turn_index = static_cast<int>(rec.turns.size()) + 1;
  if (tr.emotion->intervention != InterventionType::none) res.intervention = tr.emotion;
  const bool intensive = tr.emotion->intervention == InterventionType::intensive;
  // Intensive support takes the place of a hint once; if the previous turn was
  // already intensive the hint ladder resumes so L3 and resets stay reachable.
  const bool was_intensive = rec.turns.size() > game_start && rec.turns.back().emotion &&
                             rec.turns.back().emotion->intervention == InterventionType::intensive;

  if (!intensive || was_intensive) {
    HintContext ctx;
    ctx.idle_seconds = latency;
    ctx.consecutive_failures = f.consecutive_failures;
    double since_hint = latency;
    for (std::size_t i = rec.turns.size(); i > game_start; --i) {
      const auto& t = rec.turns[i - 1];
      if (t.hint) {
        ctx.seconds_since_last_hint = since_hint;
        break;
      }
      since_hint += t.wall_clock_latency;
    }
    const bool progressed = made_progress(before, step.output);
    ctx.just_succeeded = step.output.is_action_successful && progressed;
    ctx.player_actively_exploring = step.output.is_action_successful && !progressed;
    ctx.current_emotion = tr.emotion->state;
    if (auto level = hint_gate(ctx, config_.policy)) {
      Json task_context{{"phase", before.phase},
                        {"current_situation", step.output.current_situation},
                        {"current_goal", step.output.current_goal},
                        {"last_reply", step.output.narrative}};
      for (const auto& t : rec.spec->sub_tasks) {
        if (t.task_id == before.task.active_sub_task_id) task_context["active_sub_task"] = encode(t);
      }
      std::vector<std::string> actions;
      for (const auto* t : all) actions.push_back(t->player_action);
      try {
        tr.hint = psychology_.generate_hint(*level, task_context, actions, rec.profile);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::hint_failed) throw;
        spdlog::warn("[session] {}: no hint this turn: {}", rec.session_id, e.what());
      }
    }
  }
  res.hint = tr.hint;

  auto attempts = replay_current_game(rec).attempts;
  attempts.push_back({attempt_task(before, step.output), !step.output.is_action_successful,
                      tr.hint ? std::optional<HintLevel>(tr.hint->level) : std::nullopt});

  std::optional<Termination> ending;
  std::optional<GameSpec> new_spec;
  std::optional<TurnOutput> new_opening;
  GameState next_state = after;
  if (should_reset(attempts, config_.policy)) {
    if (rec.resets >= config_.max_resets) {
      ending = Termination::reset;
    } else {
      try {
        const int level = std::max(1, rec.spec->difficulty_level - 1);
        GameSpec spec = game_master_.design_game(rec.target_domain, rec.profile, band_for(Band::simplify), level);
        GameState st = initial_state(spec);
        const RefineResult opening = game_master_.opening(spec, st);
        next_state = apply_opening(st, opening.output);
        new_spec = std::move(spec);
        new_opening = opening.output;
        tr.reset = true;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::design_failed && e.code() != ErrorCode::control_failed) throw;
        spdlog::warn("[session] {}: easier game could not be built: {}", rec.session_id, e.what());
        ending = Termination::reset;
      }
    }
  } else if (terminal_completed(after)) {
    ending = Termination::success;
  }
  if (!ending && !tr.reset && static_cast<int>(rec.turns.size()) + 1 >= config_.turn_cap) {
    ending = Termination::failure;
  }

  res.turn = tr.turn_output;
  res.ended = ending.has_value();
  res.termination = ending;
  res.new_spec = new_spec;
  res.new_opening = new_opening;
  res.status = ending ? SessionStatus::ended : intensive ? SessionStatus::intervening : SessionStatus::awaiting_action;

  // Write-ahead: the turn (and any replacement game) is journaled before the caller sees it.
  rec.turns.push_back(tr);
  archive_.turn(rec.session_id, tr, key, res.to_json());
  if (new_spec) {
    archive_.reset(rec.session_id, *new_spec, *new_opening);
    rec.superseded_specs.push_back(*rec.spec);
    rec.spec = *new_spec;
    rec.opening = *new_opening;
    rec.resets += 1;
    spdlog::info("[session] {}: reset to an easier game (level {})", rec.session_id, rec.spec->difficulty_level);
  }
  s.state = next_state;
  s.status = res.status;
  if (ending) finish(s, *ending);
  return res;
}

TurnResult SessionService::reme_turn(Live& s, const std::string& action, double latency, const std::string& key) {
  auto& rec = s.record;
  auto [game, reply] = reme_.answer(*s.reme, action);
  const bool yes = !game.history.empty() && game.history.back().answer == "Yes";
  TurnRecord tr;
  tr.player_action = action;
  tr.turn_output = reme_output(game, reply.outputs, reply.kind == RemeReplyKind::solved || yes);
  tr.turn_output.extra = Json{{"reme_kind", reply.kind == RemeReplyKind::answer             ? "answer"
                                            : reply.kind == RemeReplyKind::redirect         ? "redirect"
                                            : reply.kind == RemeReplyKind::summary          ? "summary"
                                            : reply.kind == RemeReplyKind::solved           ? "solved"
                                                                                            : "out_of_questions"},
                              {"reme_answer", game.history.back().answer}};
  tr.wall_clock_latency = latency;

  std::optional<Termination> ending;
  if (reply.is_end) {
    ending = game.solved ? Termination::success : Termination::failure;
  } else if (static_cast<int>(rec.turns.size()) + 1 >= config_.turn_cap) {
    ending = Termination::failure;
  }
  TurnResult res;
  res.session_id = rec.session_id;
  res.turn_index = static_cast<int>(rec.turns.size()) + 1;
  res.turn = tr.turn_output;
  res.ended = ending.has_value();
  res.termination = ending;
  res.status = ending ? SessionStatus::ended : SessionStatus::awaiting_action;

  rec.turns.push_back(tr);
  archive_.turn(rec.session_id, tr, key, res.to_json());
  s.reme = std::move(game);
  s.status = res.status;
  if (ending) finish(s, *ending);
  return res;
}

void SessionService::finish(Live& s, Termination how) {
  auto& rec = s.record;
  rec.terminated = how;
  rec.ended_at = timestamp();
  if (s.reme) s.reme->ended = true;
  try {
    const auto history = store_.load(rec.profile_id);
    CognitionReport report = tracker_.score_session(rec, history);
    rec.tracker_report = report;
    store_.append(report);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::tracking_failed) throw;
    spdlog::warn("[session] {}: no tracker report: {}", rec.session_id, e.what());
  }
  archive_.ended(rec);
  s.status = SessionStatus::ended;
  spdlog::info("[session] {} ended ({}, {} turns)", rec.session_id, enum_name(how), rec.turns.size());
}

SessionHandle SessionService::get_session(const std::string& session_id) {
  auto s = find(session_id);
  std::lock_guard lock(s->mu);
  return SessionHandle{s->record.session_id, s->mode, s->status, s->state};
}

SessionRecord SessionService::record(const std::string& session_id) {
  auto s = find(session_id);
  std::lock_guard lock(s->mu);
  return s->record;
}

Json SessionService::session_view(const std::string& session_id) {
  auto s = find(session_id);
  std::lock_guard lock(s->mu);
  Json rec = encode(s->record);
  if (s->record.reme && !s->record.terminated && rec.contains("reme")) rec["reme"].erase("target");
  return Json{{"session_id", s->record.session_id},
              {"mode", enum_name(s->mode)},
              {"status", enum_name(s->status)},
              {"state", s->record.spec ? encode(s->state) : Json(nullptr)},
              {"record", rec}};
}

std::optional<CognitionReport> SessionService::report(const std::string& session_id) {
  auto s = find(session_id);
  std::lock_guard lock(s->mu);
  return s->record.tracker_report;
}

SessionRecord SessionService::abort_session(const std::string& session_id, Termination how) {
  auto s = find(session_id);
  std::lock_guard lock(s->mu);
  if (s->status != SessionStatus::ended) finish(*s, how);
  return s->record;
}

SessionRecord SessionService::play_to_end(const BatchJob& job, Method method, std::uint64_t seed) {
  std::string id;
  TurnOutput last;
  try {
    auto [handle, opening] = create_session(job.profile, job.domain, method, seed, SessionMode::batch);
    id = handle.session_id;
    last = std::move(opening);
  } catch (const Error& e) {
    spdlog::warn("[batch] {} could not start: {}", job.profile.id, e.what());
    SessionRecord r;
    r.session_id = "failed-" + safe_file_stem(job.profile.id) + "-" + std::to_string(seed);
    r.profile_id = job.profile.id;
    r.profile = job.profile;
    r.target_domain = job.domain;
    r.method = method;
    r.started_at = r.ended_at = timestamp();
    r.terminated = Termination::failure;
    archive_.ended(r);
    return r;
  }

  PatientSimulator sim(gateway_, seed, config_.agent_model);
  std::vector<SimExchange> history;
  try {
    for (;;) {
      const SimTurn move = sim.simulate_turn(job.profile, last, history);
      history.push_back({render_for_player(last), move.action});
      const TurnResult res = submit_action(id, move.action, move.declared_latency_seconds);
      if (res.ended) break;
      last = res.new_opening ? *res.new_opening : res.turn;
      if (res.hint) last.narrative += "\n\nHint: " + res.hint->hint_text;
      if (res.intervention && !res.intervention->intervention_text.empty()) {
        last.narrative += "\n\n" + res.intervention->intervention_text;
      }
    }
  } catch (const Error& e) {
    spdlog::warn("[batch] {} stopped early: {}", id, e.what());
    return abort_session(id, Termination::failure);
  }
  return record(id);
}

std::vector<SessionRecord> SessionService::simulate_batch(const std::vector<BatchJob>& jobs, Method method,
                                                          std::uint64_t seed, int parallelism) {
  std::vector<SessionRecord> out(jobs.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors;
  std::mutex err_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        const auto job_seed = stable_hash({jobs[i].profile.id, enum_name(jobs[i].domain)}, seed);
        out[i] = play_to_end(jobs[i], method, job_seed);
      } catch (...) {
        std::lock_guard lock(err_mu);
        errors.push_back(std::current_exception());
      }
    }
  };
  const int threads = std::clamp(parallelism, 1, std::max(1, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (!errors.empty()) std::rethrow_exception(errors.front());
  return out;
}

}  // namespace letgames
