// SPDX-License-Identifier: Apache-2.0
#include "letgames/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

#include <spdlog/spdlog.h>

#include "agent_util.hpp"
#include "letgames/schemas.hpp"

namespace letgames {

void to_json(Json& j, const RecordJudgment& v) {
  j = Json{{"record_id", v.record_id},
           {"evaluator", v.evaluator},
           {"helpfulness", v.helpfulness},
           {"inferred_domains", v.inferred_domains},
           {"da", v.da},
           {"safety_flag", v.safe ? "safe" : "unsafe"},
           {"risk_behaviors", v.risk_behaviors},
           {"hints_required", v.hints_required},
           {"hints_provided", v.hints_provided},
           {"anxiety_free", v.anxiety_free},
           {"anxiety_instances", v.anxiety_instances},
           {"alleviation_attempts", v.alleviation_attempts},
           {"easiness", v.easiness},
           {"coherence", v.coherence},
           {"personalization", v.personalization},
           {"enjoyment", v.enjoyment},
           {"willingness", v.willingness},
           {"rationales", v.rationales}};
}

void from_json(const Json& j, RecordJudgment& v) {
  v = RecordJudgment{};
  v.record_id = j.at("record_id").get<std::string>();
  v.evaluator = j.value("evaluator", "");
  v.helpfulness = j.at("helpfulness").get<int>();
  v.inferred_domains = j.value("inferred_domains", std::vector<CognitiveDomain>{});
  v.da = j.value("da", 0);
  v.safe = j.value("safety_flag", std::string("safe")) == "safe";
  v.risk_behaviors = j.value("risk_behaviors", std::vector<std::string>{});
  v.hints_required = j.value("hints_required", 0);
  v.hints_provided = j.value("hints_provided", 0);
  v.anxiety_instances = j.value("anxiety_instances", 0);
  v.anxiety_free = j.value("anxiety_free", v.anxiety_instances == 0);
  v.alleviation_attempts = j.value("alleviation_attempts", 0);
  v.easiness = j.at("easiness").get<int>();
  v.coherence = j.at("coherence").get<int>();
  v.personalization = j.at("personalization").get<int>();
  v.enjoyment = j.at("enjoyment").get<int>();
  v.willingness = j.at("willingness").get<int>();
  v.rationales = j.value("rationales", std::map<std::string, std::string>{});
}

std::string RecordMeta::subgroup() const {
  return std::string(enum_name(target_domain)) + "/" + std::string(enum_name(age_group));
}

RecordMeta record_meta(const SessionRecord& record) {
  return RecordMeta{record.session_id, record.target_domain, record.profile.age_group()};
}

double set_f1(const std::vector<CognitiveDomain>& target, const std::vector<CognitiveDomain>& predicted) {
  const std::set<CognitiveDomain> t(target.begin(), target.end());
  const std::set<CognitiveDomain> p(predicted.begin(), predicted.end());
  if (t.empty()) throw Error(ErrorCode::empty_target, "target domain set is empty");
  if (p.empty()) return 0.0;
  const auto hits = static_cast<double>(std::count_if(p.begin(), p.end(), [&](CognitiveDomain d) { return t.count(d) > 0; }));
  if (hits == 0.0) return 0.0;
  const double precision = hits / static_cast<double>(p.size());
  const double recall = hits / static_cast<double>(t.size());
  return 2.0 * precision * recall / (precision + recall);
}

const MetricValue& MetricReport::get(std::string_view name) const {
  for (const auto& m : metrics) {
    if (m.name == name) return m;
  }
  throw Error(ErrorCode::not_found, "no metric named " + std::string(name));
}

namespace {

Json opt_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

Json MetricReport::to_json() const {
  Json m = Json::object();
  for (const auto& v : metrics) {
    Json groups = Json::object();
    for (const auto& [g, x] : v.per_subgroup) groups[g] = opt_json(x);
    m[v.name] = Json{{"kind", v.rate ? "rate" : "scale"},
                     {"value", opt_json(v.value)},
                     {"per_subgroup", groups},
                     {"normalized_macro", opt_json(v.normalized_macro)}};
  }
  return Json{{"n_records", n_records}, {"excluded", excluded}, {"column_order", kMetricNames}, {"metrics", m}};
}

NormalizationResult normalize_scores(const std::vector<ScoreObservation>& obs, double lo, double hi) {
  struct Moments {
    double sum = 0.0;
    double sq = 0.0;
    double n = 0.0;
    double mean() const { return sum / n; }
    double sd() const { return std::sqrt(std::max(0.0, sq / n - mean() * mean())); }
  };
  std::map<std::pair<std::string, std::string>, Moments> per_eval;
  std::map<std::string, Moments> pooled;
  for (const auto& o : obs) {
    auto& e = per_eval[{o.evaluator, o.subgroup}];
    e.sum += o.value;
    e.sq += o.value * o.value;
    e.n += 1.0;
    auto& g = pooled[o.subgroup];
    g.sum += o.value;
    g.sq += o.value * o.value;
    g.n += 1.0;
  }
  NormalizationResult r;
  std::map<std::string, Moments> out_groups;
  for (const auto& o : obs) {
    const auto& e = per_eval[{o.evaluator, o.subgroup}];
    const auto& g = pooled[o.subgroup];
    double y = o.value;
    const double sd = e.sd();
    if (sd > 1e-12) y = std::clamp((o.value - e.mean()) / sd * g.sd() + g.mean(), lo, hi);
    r.normalized.push_back(y);
    auto& m = out_groups[o.subgroup];
    m.sum += y;
    m.n += 1.0;
  }
  for (const auto& [g, m] : out_groups) {
    r.subgroup_means[g] = m.mean();
    r.macro += m.mean();
  }
  if (!out_groups.empty()) r.macro /= static_cast<double>(out_groups.size());
  return r;
}

namespace {

using Subset = std::vector<const RecordJudgment*>;
using MetricFn = std::function<std::optional<double>(const Subset&)>;

std::optional<double> mean_of(const Subset& s, int RecordJudgment::*field) {
  if (s.empty()) return std::nullopt;
  double sum = 0.0;
  for (const auto* j : s) sum += j->*field;
  return sum / static_cast<double>(s.size());
}

}  // namespace

MetricReport compute_metrics(const std::vector<RecordJudgment>& judgments, const std::vector<RecordMeta>& metas) {
  if (judgments.empty()) throw Error(ErrorCode::empty_input, "no judgments to aggregate");
  std::map<std::string, RecordMeta> meta_by_id;
  for (const auto& m : metas) meta_by_id[m.record_id] = m;
  std::map<std::string, Subset> groups;
  Subset all;
  for (const auto& j : judgments) {
    auto it = meta_by_id.find(j.record_id);
    if (it == meta_by_id.end()) throw Error(ErrorCode::invalid_argument, "no metadata for record " + j.record_id);
    groups[it->second.subgroup()].push_back(&j);
    all.push_back(&j);
  }

  auto f1_of = [&](const RecordJudgment* j) {
    return set_f1({meta_by_id.at(j->record_id).target_domain}, j->inferred_domains);
  };
  const std::vector<std::pair<std::string_view, std::pair<bool, MetricFn>>> defs{
      {"Help", {false, [](const Subset& s) { return mean_of(s, &RecordJudgment::helpfulness); }}},
      {"DoAl",
       {true,
        [&](const Subset& s) -> std::optional<double> {
          if (s.empty()) return std::nullopt;
          double sum = 0.0;
          for (const auto* j : s) sum += f1_of(j);
          return sum / static_cast<double>(s.size());
        }}},
      {"Safe",
       {true,
        [](const Subset& s) -> std::optional<double> {
          if (s.empty()) return std::nullopt;
          const auto n = std::count_if(s.begin(), s.end(), [](const RecordJudgment* j) { return j->safe; });
          return static_cast<double>(n) / static_cast<double>(s.size());
        }}},
      {"NeHi",
       {true,
        [](const Subset& s) -> std::optional<double> {
          if (s.empty()) return std::nullopt;
          double req = 0.0;
          double prov = 0.0;
          for (const auto* j : s) {
            req += j->hints_required;
            prov += j->hints_provided;
          }
          if (req == 0.0) return 1.0;
          return std::min(1.0, prov / req);
        }}},
      {"Anxi",
       {true,
        [](const Subset& s) -> std::optional<double> {
          if (s.empty()) return std::nullopt;
          const auto n = std::count_if(s.begin(), s.end(), [](const RecordJudgment* j) { return j->anxiety_free; });
          return static_cast<double>(n) / static_cast<double>(s.size());
        }}},
      {"Alle",
       {true,
        [](const Subset& s) -> std::optional<double> {
          double inst = 0.0;
          double att = 0.0;
          for (const auto* j : s) {
            if (j->anxiety_instances <= 0) continue;
            inst += j->anxiety_instances;
            att += j->alleviation_attempts;
          }
          if (inst == 0.0) return std::nullopt;
          return att / inst;
        }}},
      {"Easy", {false, [](const Subset& s) { return mean_of(s, &RecordJudgment::easiness); }}},
      {"Cohe", {false, [](const Subset& s) { return mean_of(s, &RecordJudgment::coherence); }}},
      {"Pers", {false, [](const Subset& s) { return mean_of(s, &RecordJudgment::personalization); }}},
      {"Enjo", {false, [](const Subset& s) { return mean_of(s, &RecordJudgment::enjoyment); }}},
      {"Will", {false, [](const Subset& s) { return mean_of(s, &RecordJudgment::willingness); }}},
  };
  const std::map<std::string_view, int RecordJudgment::*> scale_fields{
      {"Help", &RecordJudgment::helpfulness}, {"Easy", &RecordJudgment::easiness},
      {"Cohe", &RecordJudgment::coherence},   {"Pers", &RecordJudgment::personalization},
      {"Enjo", &RecordJudgment::enjoyment},   {"Will", &RecordJudgment::willingness}};

  MetricReport report;
  report.n_records = static_cast<int>(judgments.size());
  for (const auto& [name, def] : defs) {
    const auto& [rate, fn] = def;
    MetricValue v;
    v.name = std::string(name);
    v.rate = rate;
    v.value = fn(all);
    for (const auto& [g, subset] : groups) v.per_subgroup[g] = fn(subset);
    if (rate) {
      double sum = 0.0;
      int n = 0;
      for (const auto& [g, x] : v.per_subgroup) {
        if (x) {
          sum += *x;
          ++n;
        }
      }
      if (n > 0) v.normalized_macro = sum / n;
    } else {
      std::vector<ScoreObservation> obs;
      const auto field = scale_fields.at(name);
      for (const auto& j : judgments) {
        obs.push_back({j.evaluator, meta_by_id.at(j.record_id).subgroup(), static_cast<double>(j.*field)});
      }
      v.normalized_macro = normalize_scores(obs, 0.0, 5.0).macro;
    }
    report.metrics.push_back(std::move(v));
  }
  return report;
}

std::string render_metric_table(const MetricReport& report) {
  std::ostringstream os;
  auto cell = [&](const std::optional<double>& x, bool rate) {
    std::ostringstream c;
    if (!x) {
      c << "n/a";
    } else if (rate) {
      c << std::fixed << std::setprecision(1) << *x * 100.0 << "%";
    } else {
      c << std::fixed << std::setprecision(2) << *x;
    }
    os << std::setw(8) << c.str();
  };
  os << std::left << std::setw(12) << "" << std::right;
  for (const auto& m : report.metrics) os << std::setw(8) << m.name;
  os << "\n" << std::left << std::setw(12) << "raw" << std::right;
  for (const auto& m : report.metrics) cell(m.value, m.rate);
  os << "\n" << std::left << std::setw(12) << "normalized" << std::right;
  for (const auto& m : report.metrics) cell(m.normalized_macro, m.rate);
  os << "\n"
     << "records: " << report.n_records << ", excluded: " << report.excluded << "\n";
  return os.str();
}

Json judged_view(const SessionRecord& record) {
  Json view = Json::object();
  if (record.spec) {
    const auto& s = *record.spec;
    Json npcs = Json::array();
    for (const auto& n : s.npcs) npcs.push_back({{"name", n.name}, {"relationship", n.relationship}});
    Json items = Json::array();
    for (const auto& i : s.items) items.push_back(i.item_name);
    Json subs = Json::array();
    for (const auto& t : s.sub_tasks) {
      subs.push_back({{"task_id", t.task_id},
                      {"description", t.description},
                      {"steps", t.steps},
                      {"phase", t.phase},
                      {"npc_dialogue", t.npc_dialogue ? Json(*t.npc_dialogue) : Json(nullptr)},
                      {"expected_recall", t.expected_recall ? Json(*t.expected_recall) : Json(nullptr)}});
    }
    view["scenario"] = Json{{"scenario_name", s.scenario_name},
                            {"scenario_type", s.scenario_type},
                            {"setting", encode(s.setting)},
                            {"story_background", s.story_background},
                            {"npcs", npcs},
                            {"items", items},
                            {"main_task", encode(s.main_task)},
                            {"sub_tasks", subs},
                            {"success_criteria", s.success_criteria},
                            {"difficulty_level", s.difficulty_level}};
  } else {
    view["scenario"] = nullptr;
  }
  view["player"] = Json{{"name", record.profile.name},
                        {"age", record.profile.age},
                        {"occupation", record.profile.occupation},
                        {"life_experience", record.profile.life_experience}};
  view["opening"] = record.opening ? Json(record.opening->narrative) : Json(nullptr);
  Json turns = Json::array();
  for (const auto& t : record.turns) {
    const auto& o = t.turn_output;
    Json actions = Json::array();
    for (const auto& a : o.suggested_actions) actions.push_back(a.action);
    Json row{{"player", t.player_action},
             {"game", o.narrative},
             {"npc_dialogue", o.npc_dialogue ? Json(*o.npc_dialogue) : Json(nullptr)},
             {"gentle_guidance", o.gentle_guidance ? Json(*o.gentle_guidance) : Json(nullptr)},
             {"suggested_actions", actions},
             {"is_action_successful", o.is_action_successful},
             {"is_question_moment", o.is_question_moment},
             {"hint", t.hint ? Json{{"level", t.hint->level}, {"text", t.hint->hint_text}} : Json(nullptr)},
             {"support",
              t.emotion && t.emotion->intervention != InterventionType::none ? Json(t.emotion->intervention_text)
                                                                              : Json(nullptr)},
             {"player_emotion", t.emotion ? Json(t.emotion->state) : Json(nullptr)},
             {"new_game_started", t.reset}};
    turns.push_back(std::move(row));
  }
  view["turns"] = std::move(turns);
  return view;
}

Judge::Judge(LlmGateway& gateway, ModelConfig config, std::optional<std::string> game_model)
    : gateway_(gateway), config_(std::move(config)) {
  if (game_model && *game_model == config_.model_name) {
    spdlog::warn("[judge] evaluator model {} is also the game backbone; judgments may be biased", *game_model);
  }
}

RecordJudgment Judge::judge_record(const SessionRecord& record, CognitiveDomain target) const {
  const Json view = judged_view(record);
  RecordJudgment j;
  j.record_id = record.session_id;
  j.evaluator = config_.model_name;
  try {
    auto dreq = detail::agent_request(prompts::kJudgeDomains, schema::kJudgeDomains, Json{{"session", view}}, config_);
    auto dresp = gateway_.complete_structured(std::move(dreq), std::string(schema::kJudgeDomains));
    for (const auto& d : (*dresp.parsed_document)["detected_domains"]) {
      j.inferred_domains.push_back(decode<CognitiveDomain>(d));
    }
    j.rationales["domains"] = dresp.parsed_document->value("reasoning", "");

    Json rctx{{"target_domain", target},
              {"session", view},
              {"workload_dimensions",
               {"mental demand", "temporal demand", "effort", "frustration", "performance"}}};
    auto rreq = detail::agent_request(prompts::kJudgeRubric, schema::kJudgeRubric, std::move(rctx), config_);
    auto rresp = gateway_.complete_structured(std::move(rreq), std::string(schema::kJudgeRubric));
    const Json& doc = *rresp.parsed_document;
    auto score = [&](const char* key, const char* field = "score") {
      j.rationales[key] = doc[key].value("reasoning", "");
      return static_cast<int>(std::lround(doc[key][field].get<double>()));
    };
    j.helpfulness = score("helpfulness");
    j.easiness = score("difficulty", "cognitive_load_score");
    j.coherence = score("coherence");
    j.personalization = score("personalization");
    j.enjoyment = score("enjoyment");
    j.willingness = score("willingness");
    j.risk_behaviors = doc["safety"]["risk_behaviors"].get<std::vector<std::string>>();
    j.rationales["safety"] = doc["safety"].value("reasoning", "");
    j.hints_required = doc["hints"]["required"].get<int>();
    j.hints_provided = doc["hints"]["provided"].get<int>();
    j.anxiety_instances = doc["anxiety"]["instances"].get<int>();
    j.alleviation_attempts = doc["anxiety"]["alleviation_attempts"].get<int>();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::schema_exhausted || e.code() == ErrorCode::provider_unavailable) {
      throw Error(ErrorCode::judge_failed, record.session_id + ": " + e.what());
    }
    throw;
  }
  j.da = std::find(j.inferred_domains.begin(), j.inferred_domains.end(), target) != j.inferred_domains.end() ? 1 : 0;
  j.safe = j.risk_behaviors.empty();
  j.anxiety_free = j.anxiety_instances == 0;
  return j;
}

EvaluationRun evaluate_records(const std::vector<SessionRecord>& records, const Judge& judge, int parallelism) {
  std::vector<std::optional<RecordJudgment>> slots(records.size());
  std::vector<std::string> errors(records.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < records.size(); i = next++) {
      try {
        slots[i] = judge.judge_record(records[i], records[i].target_domain);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::judge_failed) throw;
        spdlog::warn("[judge] excluded: {}", e.what());
        errors[i] = e.what();
      }
    }
  };
  const int threads = std::clamp(parallelism, 1, std::max(1, static_cast<int>(records.size())));
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(threads));
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        worker();
      } catch (...) {
        failures[static_cast<std::size_t>(t)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  EvaluationRun run;
  std::vector<RecordMeta> metas;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (slots[i]) {
      run.judgments.push_back(*slots[i]);
      metas.push_back(record_meta(records[i]));
    } else {
      run.failed_records.push_back(records[i].session_id);
    }
  }
  if (run.judgments.empty()) throw Error(ErrorCode::empty_input, "no record could be judged");
  run.report = compute_metrics(run.judgments, metas);
  run.report.excluded = static_cast<int>(run.failed_records.size());
  return run;
}

}  // namespace letgames
