// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "letgames/llm.hpp"

namespace letgames {

struct OpenAiSettings {
  std::string base_url;       // e.g. https://api.openai.com/v1
  std::string api_key;
  std::string default_model;  // overrides ModelConfig::model_name when set
  double timeout_seconds = 120.0;

  /// LETGAMES_LLM_URL (required), LETGAMES_LLM_KEY, LETGAMES_LLM_MODEL.
  static OpenAiSettings from_env();
};

/// OpenAI-compatible chat-completions client (POST {base}/chat/completions).
class OpenAiProvider : public Provider {
 public:
  explicit OpenAiProvider(OpenAiSettings settings);

  ChatResponse complete(const ChatRequest& request) override;
  std::string name() const override { return "openai_compatible"; }

  /// Request body as sent on the wire; exposed for tests.
  Json request_body(const ChatRequest& request) const;

 private:
  OpenAiSettings settings_;
  std::string origin_;       // scheme://host[:port]
  std::string path_prefix_;  // e.g. /v1
};

}  // namespace letgames
