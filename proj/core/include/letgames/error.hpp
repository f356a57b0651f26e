// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace letgames {

enum class ErrorCode {
  invalid_argument,
  parse_error,
  not_found,
  stale_task_id,
  unknown_entity,
  provider_unavailable,
  schema_exhausted,
  script_exhausted,
  unknown_schema,
  design_failed,
  control_failed,
  critique_failed,
  empty_suggestions,
  hint_failed,
  tracking_failed,
  empty_candidates,
  game_ended,
  sim_failed,
  channel_closed,
  judge_failed,
  empty_target,
  empty_input,
  session_ended,
  io_error,
};

/// Upper-case wire name, e.g. "SCHEMA_EXHAUSTED".
std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace letgames
