// SPDX-License-Identifier: Apache-2.0
//
// Offline provider: answers every agent schema with a deterministic document
// built from the request context, so whole sessions run without a model.
#pragma once

#include <string>

#include "letgames/llm.hpp"

namespace letgames {

class SyntheticProvider : public Provider {
 public:
  ChatResponse complete(const ChatRequest& request) override;
  std::string name() const override { return "synthetic"; }

  /// The document returned for `schema_id` given the agent's context object.
  static Json respond(const std::string& schema_id, const Json& context);
};

}  // namespace letgames
