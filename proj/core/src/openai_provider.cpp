// SPDX-License-Identifier: Apache-2.0
#include "letgames/openai_provider.hpp"

#include <cstdlib>

#include <httplib.h>

namespace letgames {
namespace {

std::string env_or(const char* name, std::string fallback = {}) {
  const char* v = std::getenv(name);
  return v != nullptr && *v != '\0' ? std::string(v) : fallback;
}

}  // namespace

OpenAiSettings OpenAiSettings::from_env() {
  OpenAiSettings s;
  s.base_url = env_or("LETGAMES_LLM_URL");
  if (s.base_url.empty()) throw Error(ErrorCode::invalid_argument, "LETGAMES_LLM_URL is not set");
  s.api_key = env_or("LETGAMES_LLM_KEY");
  s.default_model = env_or("LETGAMES_LLM_MODEL");
  return s;
}

OpenAiProvider::OpenAiProvider(OpenAiSettings settings) : settings_(std::move(settings)) {
  std::string url = settings_.base_url;
  while (!url.empty() && url.back() == '/') url.pop_back();
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::invalid_argument, "provider URL needs a scheme: '" + settings_.base_url + "'");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  origin_ = url.substr(0, path_start);
  path_prefix_ = path_start == std::string::npos ? std::string() : url.substr(path_start);
}

Json OpenAiProvider::request_body(const ChatRequest& request) const {
  Json messages = Json::array();
  if (!request.system.empty()) messages.push_back({{"role", "system"}, {"content", request.system}});
  for (const auto& m : request.messages) messages.push_back({{"role", m.role}, {"content", m.text}});
  Json body{{"model", settings_.default_model.empty() ? request.config.model_name : settings_.default_model},
            {"messages", std::move(messages)},
            {"temperature", request.config.temperature},
            {"max_tokens", request.config.max_tokens}};
  if (request.config.structured_mode) body["response_format"] = {{"type", "json_object"}};
  return body;
}

ChatResponse OpenAiProvider::complete(const ChatRequest& request) {
  httplib::Client client(origin_);
  const auto timeout = std::chrono::duration<double>(settings_.timeout_seconds);
  client.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout));
  client.set_read_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout));
  httplib::Headers headers;
  if (!settings_.api_key.empty()) headers.emplace("Authorization", "Bearer " + settings_.api_key);

  auto res = client.Post(path_prefix_ + "/chat/completions", headers, request_body(request).dump(),
                         "application/json");
  if (!res) {
    throw Error(ErrorCode::provider_unavailable, "transport error: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw Error(ErrorCode::provider_unavailable,
                "HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 300));
  }
  Json reply = Json::parse(res->body, nullptr, false);
  if (reply.is_discarded() || !reply.contains("choices") || reply["choices"].empty()) {
    throw Error(ErrorCode::provider_unavailable, "malformed chat-completions reply");
  }
  ChatResponse out;
  const auto& content = reply["choices"][0]["message"]["content"];
  out.text = content.is_string() ? content.get<std::string>() : std::string();
  if (reply.contains("usage") && reply["usage"].is_object()) {
    out.usage.prompt_tokens = reply["usage"].value("prompt_tokens", 0);
    out.usage.completion_tokens = reply["usage"].value("completion_tokens", 0);
  }
  return out;
}

}  // namespace letgames
