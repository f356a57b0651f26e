// SPDX-License-Identifier: Apache-2.0
//
// Shared helpers for the agent modules (private to the library).
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "letgames/codec.hpp"
#include "letgames/llm.hpp"
#include "letgames/prompts.hpp"
#include "letgames/text.hpp"

namespace letgames::detail {

/// Every agent sends one user message: a JSON object whose "task" names the schema it expects back.
inline ChatRequest agent_request(std::string_view prompt_name, std::string_view schema_id, Json context,
                                 const ModelConfig& config) {
  ChatRequest req;
  req.system = std::string(prompts::get(prompt_name));
  context["task"] = std::string(schema_id);
  req.messages.push_back({"user", context.dump(2)});
  req.config = config;
  return req;
}

/// Gateway extra check that the document decodes as T and passes `more`.
template <typename T, typename F>
std::vector<std::string> decode_then(const Json& doc, F&& more) {
  T value;
  try {
    value = decode<T>(doc);
  } catch (const Error& e) {
    return {e.what()};
  }
  return more(value);
}

/// Adds a violation for each lexicon phrase found in `field_text`.
inline void scan_lexicon(std::vector<std::string>& out, std::string_view field, std::string_view field_text,
                         const std::vector<std::string>& lexicon) {
  for (const auto& phrase : lexicon) {
    if (text::contains_ci(field_text, phrase)) {
      out.push_back(std::string(field) + ": remove the phrase \"" + phrase + "\"");
    }
  }
}

}  // namespace letgames::detail
