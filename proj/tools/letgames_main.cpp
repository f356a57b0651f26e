// SPDX-License-Identifier: Apache-2.0
//
// letgames command line: terminal play, batch simulation, evaluation,
// longitudinal reports, the REST server and cohort construction.
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "letgames/archive.hpp"
#include "letgames/cognition.hpp"
#include "letgames/codec.hpp"
#include "letgames/eval.hpp"
#include "letgames/http_api.hpp"
#include "letgames/llm.hpp"
#include "letgames/logging.hpp"
#include "letgames/patient_sim.hpp"
#include "letgames/session.hpp"

namespace fs = std::filesystem;
using namespace letgames;

namespace {

struct Globals {
  std::string provider;
  std::string model;
  fs::path data_dir;
  fs::path fixtures = LETGAMES_DEFAULT_FIXTURE_DIR;
  std::string log_level = "warn";
};

std::string default_provider() {
  const char* url = std::getenv("LETGAMES_LLM_URL");
  return url != nullptr && *url != '\0' ? "openai_compatible" : "stub";
}

SessionConfig session_config(const Globals& g) {
  SessionConfig c;
  c.data_dir = g.data_dir;
  if (fs::exists(g.fixtures / "psychology_policy.json")) c.policy = PsychologyPolicy::load(g.fixtures / "psychology_policy.json");
  if (fs::exists(g.fixtures / "reme_candidates.json")) {
    c.reme_candidates = RemeCandidates::load(g.fixtures / "reme_candidates.json");
  }
  if (!g.model.empty()) c.agent_model.model_name = g.model;
  return c;
}

std::unique_ptr<LlmGateway> gateway_for(const std::string& kind, const std::string& model) {
  return std::make_unique<LlmGateway>(make_provider(kind, model));
}

void write_json(const fs::path& path, const Json& doc) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path.string());
  out << doc.dump(2) << "\n";
}

std::vector<CognitiveDomain> domains_from(const std::vector<std::string>& names) {
  if (names.empty()) return all_domains();
  std::vector<CognitiveDomain> out;
  for (const auto& n : names) out.push_back(parse_domain(n));
  return out;
}

PatientProfile pick_profile(const Globals& g, const std::string& id) {
  const auto profiles = load_profiles(g.fixtures / "profiles_base.json");
  if (id.empty()) return profiles.front();
  for (const auto& p : profiles) {
    if (p.id == id) return p;
  }
  throw Error(ErrorCode::not_found, "no profile with id " + id);
}

void print_turn(const TurnResult& r) {
  std::cout << "\n" << render_for_player(r.turn) << "\n";
  if (r.hint) std::cout << "\nHint: " << r.hint->hint_text << "\n";
  if (r.intervention && !r.intervention->intervention_text.empty()) {
    std::cout << "\n" << r.intervention->intervention_text << "\n";
  }
  if (r.new_opening) std::cout << "\nLet's try a gentler game.\n\n" << render_for_player(*r.new_opening) << "\n";
}

int run_play(const Globals& g, const std::string& profile_id, const std::string& domain, const std::string& method) {
  auto gateway = gateway_for(g.provider, g.model);
  SessionService service(*gateway, session_config(g));
  const PatientProfile profile = pick_profile(g, profile_id);
  auto [handle, opening] = service.create_session(profile, parse_domain(domain), decode<Method>(Json(method)));
  std::cout << "Session " << handle.session_id << " for " << profile.name << " (type quit to stop)\n\n"
            << render_for_player(opening) << "\n";
  auto shown = std::chrono::steady_clock::now();
  std::string line;
  while (std::cout << "\n> " << std::flush, std::getline(std::cin, line)) {
    if (line.empty()) continue;
    const double latency = std::chrono::duration<double>(std::chrono::steady_clock::now() - shown).count();
    const TurnResult r = service.submit_action(handle.session_id, line, latency);
    print_turn(r);
    shown = std::chrono::steady_clock::now();
    if (r.ended) break;
  }
  if (service.get_session(handle.session_id).status != SessionStatus::ended) {
    service.abort_session(handle.session_id, Termination::abandoned);
  }
  if (auto report = service.report(handle.session_id)) {
    std::cout << "\n" << render_trajectory({*report}) << "\n" << report->encouragement << "\n";
  }
  return 0;
}

int run_simulate(const Globals& g, const std::string& method, const fs::path& cohort_file, std::uint64_t seed,
                 const fs::path& out, const std::vector<std::string>& domains, int parallelism, int limit) {
  auto gateway = gateway_for(g.provider, g.model);
  SessionService service(*gateway, session_config(g));
  auto jobs = batch_jobs(load_cohort(cohort_file), domains_from(domains));
  if (limit > 0 && static_cast<std::size_t>(limit) < jobs.size()) jobs.resize(static_cast<std::size_t>(limit));
  const auto records = service.simulate_batch(jobs, decode<Method>(Json(method)), seed, parallelism);
  write_records(out, records);
  int completed = 0;
  for (const auto& r : records) {
    if (r.terminated == Termination::success) ++completed;
  }
  std::cout << "wrote " << records.size() << " sessions to " << out.string() << " (" << completed << " completed)\n";
  return 0;
}

int run_evaluate(const Globals& g, const fs::path& sessions, const std::string& judge_kind, const fs::path& out,
                 int parallelism) {
  const auto records = read_records(sessions);
  auto gateway = gateway_for(judge_kind == "llm" ? "openai_compatible" : "stub", "");
  ModelConfig evaluator = ModelConfig::evaluator();
  const Judge judge(*gateway, evaluator, g.model.empty() ? ModelConfig::game_agent().model_name : g.model);
  const EvaluationRun run = evaluate_records(records, judge, parallelism);
  Json doc = run.report.to_json();
  doc["failed_records"] = run.failed_records;
  doc["judgments"] = Json(run.judgments);
  write_json(out, doc);
  std::cout << render_metric_table(run.report) << "\n";
  if (!run.failed_records.empty()) std::cout << run.failed_records.size() << " record(s) excluded after judge failures\n";
  return 0;
}

int run_report(const Globals& g, const std::string& profile_id) {
  LongitudinalStore store(g.data_dir);
  const auto reports = store.load(profile_id);
  if (reports.empty()) {
    std::cerr << "no reports for profile " << profile_id << " under " << g.data_dir.string() << "\n";
    return 1;
  }
  std::cout << render_trajectory(reports) << "\n";
  return 0;
}

HttpApi* g_server = nullptr;

int run_serve(const Globals& g, const std::string& host, int port, const std::string& judge_kind) {
  auto gateway = gateway_for(g.provider, g.model);
  auto judge_gateway = gateway_for(judge_kind == "llm" ? "openai_compatible" : "stub", "");
  SessionService service(*gateway, session_config(g));
  HttpApi api(service, *judge_gateway);
  g_server = &api;
  std::signal(SIGINT, [](int) {
    if (g_server != nullptr) g_server->stop();
  });
  std::cout << "listening on http://" << host << ":" << port << " (data in " << g.data_dir.string() << ")\n";
  return api.listen(host, port) ? 0 : 1;
}

int run_cohort(const Globals& g, fs::path profiles, std::uint64_t seed, double depression_rate,
               const std::string& severity, const std::vector<std::string>& domains, const fs::path& out) {
  if (profiles.empty()) profiles = g.fixtures / "profiles_base.json";
  CohortSpec spec;
  spec.base_profiles = load_profiles(profiles);
  spec.domains = domains_from(domains);
  spec.depression_rate = depression_rate;
  spec.rng_seed = seed;
  spec.severity = decode<Severity>(Json(severity));
  const Cohort c = build_cohort(spec);
  save_cohort(out, c);
  std::cout << "wrote " << c.sps.size() << " simulated patients and " << c.controls.size() << " controls to "
            << out.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LETGAMES cognitive training games"};
  app.require_subcommand(1);
  Globals g;
  g.provider = default_provider();
  g.data_dir = SessionConfig::data_dir_from_env();
  app.add_option("--provider", g.provider, "Model backend: stub or openai_compatible")
      ->check(CLI::IsMember({"stub", "openai_compatible"}));
  app.add_option("--model", g.model, "Model name for the game agents");
  app.add_option("--data-dir", g.data_dir, "Archive directory (default: $LETGAMES_DATA_DIR)");
  app.add_option("--fixtures", g.fixtures, "Directory holding profiles, policy and candidate files");
  app.add_option("--log-level", g.log_level, "Engine log level on stderr")
      ->check(CLI::IsMember({"debug", "info", "warn", "error", "off"}));

  std::string profile_id;
  std::string domain = "memory";
  std::string method = "letgames";
  auto* play = app.add_subcommand("play", "Play a game in the terminal");
  play->add_option("--profile", profile_id, "Profile id from profiles_base.json");
  play->add_option("--domain", domain, "Target cognitive domain");
  play->add_option("--method", method, "letgames or reme")->check(CLI::IsMember({"letgames", "reme"}));

  fs::path cohort_file;
  std::uint64_t seed = 42;
  fs::path out;
  std::vector<std::string> domains;
  int parallelism = 1;
  int limit = 0;
  auto* simulate = app.add_subcommand("simulate", "Play a cohort with simulated players");
  simulate->add_option("--method", method, "letgames or reme")->required()->check(CLI::IsMember({"letgames", "reme"}));
  simulate->add_option("--cohort", cohort_file, "Cohort file")->required()->check(CLI::ExistingFile);
  simulate->add_option("--seed", seed, "Batch seed");
  simulate->add_option("--out", out, "Output sessions JSONL")->required();
  simulate->add_option("--domains", domains, "Domains cycled by healthy controls");
  simulate->add_option("--parallelism", parallelism, "Concurrent sessions")->check(CLI::PositiveNumber);
  simulate->add_option("--limit", limit, "Play only the first N jobs");

  fs::path sessions;
  std::string judge_kind = "stub";
  auto* evaluate = app.add_subcommand("evaluate", "Judge archived sessions and aggregate the metrics");
  evaluate->add_option("--sessions", sessions, "Sessions JSONL")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--judge", judge_kind, "stub or llm")->check(CLI::IsMember({"stub", "llm"}));
  evaluate->add_option("--out", out, "Output metrics report")->required();
  evaluate->add_option("--parallelism", parallelism, "Concurrent judge calls")->check(CLI::PositiveNumber);

  auto* report = app.add_subcommand("report", "Show a player's longitudinal trajectory");
  report->add_option("--profile", profile_id, "Profile id")->required();

  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Run the REST API");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port");
  serve->add_option("--judge", judge_kind, "stub or llm")->check(CLI::IsMember({"stub", "llm"}));

  fs::path profiles;
  double depression_rate = 0.30;
  std::string severity = "moderate";
  auto* cohort = app.add_subcommand("cohort", "Build a simulated-patient cohort from base profiles");
  cohort->add_option("--profiles", profiles, "Base profiles (default: fixtures/profiles_base.json)");
  cohort->add_option("--seed", seed, "Shuffle seed");
  cohort->add_option("--depression-rate", depression_rate, "Share of patients with comorbid depression");
  cohort->add_option("--severity", severity, "mild, moderate or severe")
      ->check(CLI::IsMember({"mild", "moderate", "severe"}));
  cohort->add_option("--domains", domains, "Impaired domains");
  cohort->add_option("--out", out, "Output cohort file")->required();

  CLI11_PARSE(app, argc, argv);
  configure_logging(g.log_level);

  try {
    if (*play) return run_play(g, profile_id, domain, method);
    if (*simulate) return run_simulate(g, method, cohort_file, seed, out, domains, parallelism, limit);
    if (*evaluate) return run_evaluate(g, sessions, judge_kind, out, parallelism);
    if (*report) return run_report(g, profile_id);
    if (*serve) return run_serve(g, host, port, judge_kind);
    if (*cohort) return run_cohort(g, profiles, seed, depression_rate, severity, domains, out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
