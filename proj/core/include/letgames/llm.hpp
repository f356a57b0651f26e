// SPDX-License-Identifier: Apache-2.0
//
// Model gateway: every agent call goes through LlmGateway::complete_structured,
// which validates the returned document against a registered schema and
// retries with a corrective message until it validates or the budget runs out.
#pragma once

#include <atomic>
#include <chrono>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <vector>

#include "letgames/domain.hpp"

namespace letgames {

struct ModelConfig {
  std::string model_name = "gpt-4o-mini";
  double temperature = 0.7;
  int max_tokens = 20000;
  bool structured_mode = true;
  int max_retries = 3;
  double backoff_base = 0.5;  // seconds; doubled after every transport failure

  static ModelConfig game_agent();
  static ModelConfig evaluator();

  std::vector<std::string> violations() const;
};

struct ChatMessage {
  std::string role;  // "user" | "assistant"
  std::string text;

  bool operator==(const ChatMessage&) const = default;
};

struct ChatRequest {
  std::string system;
  std::vector<ChatMessage> messages;
  ModelConfig config;
  std::string schema_id;  // set by the gateway; lets stubs route by agent
};

struct Usage {
  int prompt_tokens = 0;
  int completion_tokens = 0;
};

struct ChatResponse {
  std::string text;
  std::optional<Json> parsed_document;
  Usage usage;
  int attempts = 1;
};

/// A raw completion backend. Implementations throw Error(provider_unavailable)
/// for transport failures; the gateway retries those.
class Provider {
 public:
  virtual ~Provider() = default;
  virtual ChatResponse complete(const ChatRequest& request) = 0;
  virtual std::string name() const = 0;
};

/// One scripted reply: text to return, or a simulated transport failure.
struct ScriptEntry {
  std::string text;
  bool transport_failure = false;

  ScriptEntry(std::string t) : text(std::move(t)) {}  // NOLINT: implicit from text
  ScriptEntry(const char* t) : text(t) {}              // NOLINT
  static ScriptEntry failure() {
    ScriptEntry e("");
    e.transport_failure = true;
    return e;
  }
};

/// Replays a single global script verbatim and records every request.
class ScriptedProvider : public Provider {
 public:
  explicit ScriptedProvider(std::vector<ScriptEntry> script = {});

  ChatResponse complete(const ChatRequest& request) override;
  std::string name() const override { return "scripted"; }

  void push(ScriptEntry entry);
  std::vector<ChatRequest> requests() const;
  std::size_t remaining() const;

 private:
  mutable std::mutex mu_;
  std::deque<ScriptEntry> script_;
  std::vector<ChatRequest> requests_;
};

/// One script queue per schema id, so a multi-agent session can be scripted
/// agent by agent. Schemas without a queue go to `fallback` when provided.
class RoutedScriptProvider : public Provider {
 public:
  explicit RoutedScriptProvider(std::shared_ptr<Provider> fallback = nullptr);

  ChatResponse complete(const ChatRequest& request) override;
  std::string name() const override { return "routed-script"; }

  void push(const std::string& schema_id, ScriptEntry entry);
  void push_json(const std::string& schema_id, const Json& document) { push(schema_id, document.dump()); }
  std::vector<ChatRequest> requests() const;
  std::vector<ChatRequest> requests_for(const std::string& schema_id) const;
  std::size_t remaining(const std::string& schema_id) const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::deque<ScriptEntry>> scripts_;
  std::vector<ChatRequest> requests_;
  std::shared_ptr<Provider> fallback_;
};

using SchemaValidator = std::function<std::vector<std::string>(const Json&)>;

class SchemaRegistry {
 public:
  void add(std::string schema_id, SchemaValidator validator);
  bool contains(const std::string& schema_id) const;
  /// Throws Error(unknown_schema).
  std::vector<std::string> validate(const std::string& schema_id, const Json& document) const;
  std::vector<std::string> ids() const;

  /// Registry holding every agent output schema (see schemas.hpp).
  static std::shared_ptr<const SchemaRegistry> builtin();

 private:
  std::map<std::string, SchemaValidator> validators_;
};

/// Pulls the JSON object out of a model reply (tolerates code fences and prose around it).
std::optional<Json> extract_json(std::string_view text);

/// Exposed for tests: the user message appended after a rejected reply.
std::string corrective_message(const std::string& schema_id, const std::vector<std::string>& violations);

class LlmGateway {
 public:
  using Sleeper = std::function<void(std::chrono::duration<double>)>;
  /// Semantic checks beyond the schema (e.g. lexicon rules); violations trigger a corrective retry.
  using ExtraCheck = std::function<std::vector<std::string>(const Json&)>;

  explicit LlmGateway(std::shared_ptr<Provider> provider,
                      std::shared_ptr<const SchemaRegistry> schemas = SchemaRegistry::builtin(),
                      int parallelism = 4, Sleeper sleeper = {});

  /// Returns the first reply whose document validates. Throws
  /// PROVIDER_UNAVAILABLE when the last attempt failed in transport,
  /// SCHEMA_EXHAUSTED when it returned an invalid document, UNKNOWN_SCHEMA
  /// for unregistered ids. attempts <= max_retries + 1.
  ChatResponse complete_structured(ChatRequest request, const std::string& schema_id,
                                   const ExtraCheck& extra_check = {});

  Provider& provider() { return *provider_; }
  const std::string& provider_name() const { return provider_name_; }

  struct Stats {
    std::uint64_t calls = 0;
    std::uint64_t attempts = 0;
    std::uint64_t failures = 0;
  };
  Stats stats() const;

 private:
  std::shared_ptr<Provider> provider_;
  std::shared_ptr<const SchemaRegistry> schemas_;
  std::counting_semaphore<1024> slots_;
  Sleeper sleeper_;
  std::string provider_name_;
  std::atomic<std::uint64_t> calls_{0};
  std::atomic<std::uint64_t> attempts_{0};
  std::atomic<std::uint64_t> failures_{0};
};

/// Provider selection for tools: "stub" (synthetic) or "openai_compatible"
/// (LETGAMES_LLM_URL / LETGAMES_LLM_KEY). Throws Error(invalid_argument).
std::shared_ptr<Provider> make_provider(const std::string& kind, const std::string& model_name = {});

}  // namespace letgames
