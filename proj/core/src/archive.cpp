// SPDX-License-Identifier: Apache-2.0
#include "letgames/archive.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "letgames/codec.hpp"

namespace letgames {

void append_jsonl(const std::filesystem::path& path, const Json& doc) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  const std::string line = doc.dump() + "\n";
  std::FILE* f = std::fopen(path.c_str(), "ab");
  if (f == nullptr) throw Error(ErrorCode::io_error, "cannot open " + path.string() + " for append");
  const bool ok = std::fwrite(line.data(), 1, line.size(), f) == line.size() && std::fflush(f) == 0;
  std::fclose(f);
  if (!ok) throw Error(ErrorCode::io_error, "short write to " + path.string());
}

std::vector<Json> read_jsonl(const std::filesystem::path& path) {
  std::vector<Json> out;
  std::ifstream in(path);
  if (!in) return out;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse_json(line));
    } catch (const Error& e) {
      throw Error(ErrorCode::parse_error, path.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

std::vector<SessionRecord> read_records(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error(ErrorCode::io_error, "no such file " + path.string());
  std::vector<SessionRecord> out;
  for (const auto& doc : read_jsonl(path)) out.push_back(decode<SessionRecord>(doc));
  return out;
}

void write_records(const std::filesystem::path& path, const std::vector<SessionRecord>& records) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path.string());
  for (const auto& r : records) out << encode(r).dump() << "\n";
  if (!out) throw Error(ErrorCode::io_error, "short write to " + path.string());
}

std::string safe_file_stem(std::string_view id) {
  std::string out;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' ||
                    c == '_' || c == '-';
    out += ok ? c : '_';
  }
  if (out.empty() || out[0] == '.') out.insert(out.begin(), '_');
  return out;
}

JournalReplay replay_journal(const std::vector<Json>& events) {
  if (events.empty() || events.front().value("event", "") != journal::kCreated) {
    throw Error(ErrorCode::parse_error, "journal must start with a created event");
  }
  JournalReplay r;
  r.record = decode<SessionRecord>(events.front().at("record"));
  r.meta = events.front().value("meta", Json::object());
  for (std::size_t i = 1; i < events.size(); ++i) {
    const auto& e = events[i];
    const std::string kind = e.value("event", "");
    if (kind == journal::kTurn) {
      r.record.turns.push_back(decode<TurnRecord>(e.at("turn")));
      r.last_idempotency_key = e.value("idempotency_key", "");
      r.last_response = e.value("response", Json(nullptr));
    } else if (kind == journal::kReset) {
      if (r.record.spec) r.record.superseded_specs.push_back(*r.record.spec);
      r.record.spec = decode<GameSpec>(e.at("spec"));
      r.record.opening = decode<TurnOutput>(e.at("opening"));
      r.record.resets += 1;
    } else if (kind == journal::kEnded) {
      const auto done = decode<SessionRecord>(e.at("record"));
      r.record.terminated = done.terminated;
      r.record.ended_at = done.ended_at;
      r.record.tracker_report = done.tracker_report;
    } else {
      throw Error(ErrorCode::parse_error, "unknown journal event '" + kind + "'");
    }
  }
  return r;
}

SessionArchive::SessionArchive(std::filesystem::path root) : root_(std::move(root)) {}

std::filesystem::path SessionArchive::journal_file(const std::string& session_id) const {
  return root_ / "live" / (safe_file_stem(session_id) + ".jsonl");
}

void SessionArchive::created(const SessionRecord& header, const Json& meta) {
  std::lock_guard lock(mu_);
  append_jsonl(journal_file(header.session_id),
               Json{{"event", journal::kCreated}, {"record", encode(header)}, {"meta", meta}});
}

void SessionArchive::turn(const std::string& session_id, const TurnRecord& turn, const std::string& idempotency_key,
                          const Json& response) {
  std::lock_guard lock(mu_);
  append_jsonl(journal_file(session_id), Json{{"event", journal::kTurn},
                                              {"turn", encode(turn)},
                                              {"idempotency_key", idempotency_key},
                                              {"response", response}});
}

void SessionArchive::reset(const std::string& session_id, const GameSpec& new_spec, const TurnOutput& opening) {
  std::lock_guard lock(mu_);
  append_jsonl(journal_file(session_id),
               Json{{"event", journal::kReset}, {"spec", encode(new_spec)}, {"opening", encode(opening)}});
}

void SessionArchive::ended(const SessionRecord& record) {
  std::lock_guard lock(mu_);
  SessionRecord tail;
  tail.session_id = record.session_id;
  tail.terminated = record.terminated;
  tail.ended_at = record.ended_at;
  tail.tracker_report = record.tracker_report;
  append_jsonl(journal_file(record.session_id), Json{{"event", journal::kEnded}, {"record", encode(tail)}});
  append_jsonl(sessions_file(), encode(record));
}

std::optional<JournalReplay> SessionArchive::load(const std::string& session_id) const {
  std::lock_guard lock(mu_);
  auto events = read_jsonl(journal_file(session_id));
  if (events.empty()) return std::nullopt;
  return replay_journal(events);
}

std::vector<std::string> SessionArchive::live_session_ids() const {
  std::vector<std::string> out;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(root_ / "live", ec)) {
    if (entry.path().extension() == ".jsonl") out.push_back(entry.path().stem().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace letgames
