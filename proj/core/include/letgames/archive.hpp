// SPDX-License-Identifier: Apache-2.0
//
// JSONL persistence: finished SessionRecords one per line, plus a per-session
// write-ahead journal from which a live session can be rebuilt.
#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "letgames/domain.hpp"

namespace letgames {

/// Appends one compact JSON line and flushes it. Creates parent directories.
/// Throws Error(io_error).
void append_jsonl(const std::filesystem::path& path, const Json& doc);

/// Every non-blank line parsed; a missing file yields an empty list. Throws
/// Error(parse_error) naming the line for malformed content.
std::vector<Json> read_jsonl(const std::filesystem::path& path);

std::vector<SessionRecord> read_records(const std::filesystem::path& path);
void write_records(const std::filesystem::path& path, const std::vector<SessionRecord>& records);

/// Lower-cases nothing, keeps [A-Za-z0-9._-], replaces everything else with '_'.
std::string safe_file_stem(std::string_view id);

/// Journal event kinds, in the order they may appear.
namespace journal {
inline constexpr std::string_view kCreated = "created";
inline constexpr std::string_view kTurn = "turn";
inline constexpr std::string_view kReset = "reset";
inline constexpr std::string_view kEnded = "ended";
}  // namespace journal

struct JournalReplay {
  SessionRecord record;
  std::string last_idempotency_key;
  Json last_response = nullptr;  // API payload returned for the last turn
  Json meta = Json::object();    // method-specific data stored with the creation event
};

/// Folds journal events back into a record. Throws Error(parse_error) when the
/// journal does not start with a creation event.
JournalReplay replay_journal(const std::vector<Json>& events);

class SessionArchive {
 public:
  /// `root` holds sessions.jsonl and live/<session_id>.jsonl.
  explicit SessionArchive(std::filesystem::path root);

  void created(const SessionRecord& header, const Json& meta = Json::object());
  void turn(const std::string& session_id, const TurnRecord& turn, const std::string& idempotency_key,
            const Json& response);
  void reset(const std::string& session_id, const GameSpec& new_spec, const TurnOutput& opening);
  /// Journals the end and appends the finished record to sessions.jsonl.
  void ended(const SessionRecord& record);

  std::optional<JournalReplay> load(const std::string& session_id) const;
  std::vector<std::string> live_session_ids() const;

  std::filesystem::path sessions_file() const { return root_ / "sessions.jsonl"; }
  std::filesystem::path journal_file(const std::string& session_id) const;
  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path root_;
  mutable std::mutex mu_;
};

}  // namespace letgames
