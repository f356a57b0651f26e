// SPDX-License-Identifier: Apache-2.0
#include "letgames/llm.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <spdlog/spdlog.h>

#include "letgames/openai_provider.hpp"
#include "letgames/synthetic_provider.hpp"

namespace letgames {

ModelConfig ModelConfig::game_agent() { return ModelConfig{}; }

ModelConfig ModelConfig::evaluator() {
  ModelConfig c;
  c.temperature = 0.2;
  return c;
}

std::vector<std::string> ModelConfig::violations() const {
  std::vector<std::string> out;
  if (temperature < 0) out.emplace_back("temperature must be >= 0");
  if (max_tokens <= 0) out.emplace_back("max_tokens must be > 0");
  if (max_retries < 0) out.emplace_back("max_retries must be >= 0");
  if (backoff_base < 0) out.emplace_back("backoff_base must be >= 0");
  return out;
}

// ---------------------------------------------------------------------------

ScriptedProvider::ScriptedProvider(std::vector<ScriptEntry> script) : script_(script.begin(), script.end()) {}

ChatResponse ScriptedProvider::complete(const ChatRequest& request) {
  std::lock_guard lock(mu_);
  requests_.push_back(request);
  if (script_.empty()) {
    throw Error(ErrorCode::script_exhausted, "no scripted reply left for call #" + std::to_string(requests_.size()));
  }
  ScriptEntry entry = std::move(script_.front());
  script_.pop_front();
  if (entry.transport_failure) throw Error(ErrorCode::provider_unavailable, "scripted transport failure");
  ChatResponse r;
  r.text = std::move(entry.text);
  return r;
}

void ScriptedProvider::push(ScriptEntry entry) {
  std::lock_guard lock(mu_);
  script_.push_back(std::move(entry));
}

std::vector<ChatRequest> ScriptedProvider::requests() const {
  std::lock_guard lock(mu_);
  return requests_;
}

std::size_t ScriptedProvider::remaining() const {
  std::lock_guard lock(mu_);
  return script_.size();
}

RoutedScriptProvider::RoutedScriptProvider(std::shared_ptr<Provider> fallback) : fallback_(std::move(fallback)) {}

ChatResponse RoutedScriptProvider::complete(const ChatRequest& request) {
  std::unique_lock lock(mu_);
  requests_.push_back(request);
  auto it = scripts_.find(request.schema_id);
  if (it == scripts_.end() || it->second.empty()) {
    if (fallback_) {
      lock.unlock();
      return fallback_->complete(request);
    }
    throw Error(ErrorCode::script_exhausted, "no scripted reply left for schema '" + request.schema_id + "'");
  }
  ScriptEntry entry = std::move(it->second.front());
  it->second.pop_front();
  if (entry.transport_failure) throw Error(ErrorCode::provider_unavailable, "scripted transport failure");
  ChatResponse r;
  r.text = std::move(entry.text);
  return r;
}

void RoutedScriptProvider::push(const std::string& schema_id, ScriptEntry entry) {
  std::lock_guard lock(mu_);
  scripts_[schema_id].push_back(std::move(entry));
}

std::vector<ChatRequest> RoutedScriptProvider::requests() const {
  std::lock_guard lock(mu_);
  return requests_;
}

std::vector<ChatRequest> RoutedScriptProvider::requests_for(const std::string& schema_id) const {
  std::lock_guard lock(mu_);
  std::vector<ChatRequest> out;
  for (const auto& r : requests_) {
    if (r.schema_id == schema_id) out.push_back(r);
  }
  return out;
}

std::size_t RoutedScriptProvider::remaining(const std::string& schema_id) const {
  std::lock_guard lock(mu_);
  auto it = scripts_.find(schema_id);
  return it == scripts_.end() ? 0 : it->second.size();
}

// ---------------------------------------------------------------------------

void SchemaRegistry::add(std::string schema_id, SchemaValidator validator) {
  validators_[std::move(schema_id)] = std::move(validator);
}

bool SchemaRegistry::contains(const std::string& schema_id) const { return validators_.count(schema_id) > 0; }

std::vector<std::string> SchemaRegistry::validate(const std::string& schema_id, const Json& document) const {
  auto it = validators_.find(schema_id);
  if (it == validators_.end()) throw Error(ErrorCode::unknown_schema, "schema '" + schema_id + "' is not registered");
  return it->second(document);
}

std::vector<std::string> SchemaRegistry::ids() const {
  std::vector<std::string> out;
  for (const auto& [id, v] : validators_) out.push_back(id);
  return out;
}

std::optional<Json> extract_json(std::string_view text) {
  auto try_parse = [](std::string_view s) -> std::optional<Json> {
    Json j = Json::parse(s, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) return std::nullopt;
    return j;
  };
  if (auto j = try_parse(text)) return j;
  const auto open = text.find('{');
  const auto close = text.rfind('}');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open) return std::nullopt;
  return try_parse(text.substr(open, close - open + 1));
}

std::string corrective_message(const std::string& schema_id, const std::vector<std::string>& violations) {
  std::string msg = "Your previous reply was rejected for schema '" + schema_id + "'. Problems found:\n";
  for (const auto& v : violations) msg += "- " + v + "\n";
  msg += "Reply again with a single JSON object that fixes every problem listed above. No prose.";
  return msg;
}

// ---------------------------------------------------------------------------

LlmGateway::LlmGateway(std::shared_ptr<Provider> provider, std::shared_ptr<const SchemaRegistry> schemas,
                       int parallelism, Sleeper sleeper)
    : provider_(std::move(provider)),
      schemas_(std::move(schemas)),
      slots_(std::clamp(parallelism, 1, 1024)),
      sleeper_(std::move(sleeper)) {
  if (!provider_) throw Error(ErrorCode::invalid_argument, "gateway needs a provider");
  if (!schemas_) throw Error(ErrorCode::invalid_argument, "gateway needs a schema registry");
  if (!sleeper_) sleeper_ = [](std::chrono::duration<double> d) { std::this_thread::sleep_for(d); };
  provider_name_ = provider_->name();
}

ChatResponse LlmGateway::complete_structured(ChatRequest request, const std::string& schema_id,
                                             const ExtraCheck& extra_check) {
  if (!schemas_->contains(schema_id)) {
    throw Error(ErrorCode::unknown_schema, "schema '" + schema_id + "' is not registered");
  }
  if (auto bad = request.config.violations(); !bad.empty()) {
    throw Error(ErrorCode::invalid_argument, "model config: " + bad.front());
  }
  request.schema_id = schema_id;
  calls_.fetch_add(1, std::memory_order_relaxed);

  slots_.acquire();
  struct Release {
    std::counting_semaphore<1024>& s;
    ~Release() { s.release(); }
  } release{slots_};

  const int budget = request.config.max_retries + 1;
  Usage usage;
  int transport_failures = 0;
  std::vector<std::string> last_violations;
  bool last_was_transport = false;
  for (int attempt = 1; attempt <= budget; ++attempt) {
    attempts_.fetch_add(1, std::memory_order_relaxed);
    ChatResponse raw;
    try {
      raw = provider_->complete(request);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::provider_unavailable) throw;
      last_was_transport = true;
      spdlog::warn("[gateway] {} attempt {}/{}: {}", schema_id, attempt, budget, e.what());
      if (attempt < budget) {
        sleeper_(std::chrono::duration<double>(request.config.backoff_base * std::pow(2.0, transport_failures)));
      }
      ++transport_failures;
      continue;
    }
    last_was_transport = false;
    usage.prompt_tokens += raw.usage.prompt_tokens;
    usage.completion_tokens += raw.usage.completion_tokens;

    std::vector<std::string> violations;
    auto doc = extract_json(raw.text);
    if (!doc) {
      violations.emplace_back("reply is not valid JSON");
    } else if (!doc->is_object()) {
      violations.emplace_back("reply must be a JSON object");
    } else {
      violations = schemas_->validate(schema_id, *doc);
      if (violations.empty() && extra_check) violations = extra_check(*doc);
    }
    if (violations.empty()) {
      ChatResponse out;
      out.text = std::move(raw.text);
      out.parsed_document = std::move(doc);
      out.usage = usage;
      out.attempts = attempt;
      return out;
    }
    spdlog::debug("[gateway] {} attempt {}/{} rejected: {}", schema_id, attempt, budget, violations.front());
    request.messages.push_back({"assistant", raw.text});
    request.messages.push_back({"user", corrective_message(schema_id, violations)});
    last_violations = std::move(violations);
  }
  failures_.fetch_add(1, std::memory_order_relaxed);
  if (last_was_transport) {
    throw Error(ErrorCode::provider_unavailable,
                schema_id + ": transport failed on the final attempt (" + std::to_string(budget) + " attempts)");
  }
  std::string detail = last_violations.empty() ? std::string("no valid document") : last_violations.front();
  throw Error(ErrorCode::schema_exhausted,
              schema_id + ": no valid document after " + std::to_string(budget) + " attempts (" + detail + ")");
}

LlmGateway::Stats LlmGateway::stats() const {
  return {calls_.load(), attempts_.load(), failures_.load()};
}

std::shared_ptr<Provider> make_provider(const std::string& kind, const std::string& model_name) {
  if (kind == "stub") return std::make_shared<SyntheticProvider>();
  if (kind == "openai_compatible" || kind == "llm") {
    auto settings = OpenAiSettings::from_env();
    if (!model_name.empty()) settings.default_model = model_name;
    return std::make_shared<OpenAiProvider>(std::move(settings));
  }
  throw Error(ErrorCode::invalid_argument, "unknown provider '" + kind + "' (expected stub|openai_compatible)");
}

}  // namespace letgames
