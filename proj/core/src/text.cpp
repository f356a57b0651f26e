// SPDX-License-Identifier: Apache-2.0
#include "letgames/text.hpp"

#include <algorithm>
#include <cctype>

namespace letgames::text {
namespace {

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

}  // namespace

std::string trim(std::string_view s) {
  auto begin = std::find_if_not(s.begin(), s.end(), is_space);
  auto end = std::find_if_not(s.rbegin(), s.rend(), is_space).base();
  return begin < end ? std::string(begin, end) : std::string();
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool mentions(std::string_view haystack, std::string_view phrase) {
  if (phrase.empty()) return false;
  for (std::size_t pos = haystack.find(phrase); pos != std::string_view::npos;
       pos = haystack.find(phrase, pos + 1)) {
    const bool left_ok = pos == 0 || !is_word_char(haystack[pos - 1]) || !is_word_char(phrase.front());
    const std::size_t end = pos + phrase.size();
    const bool right_ok =
        end == haystack.size() || !is_word_char(haystack[end]) || !is_word_char(phrase.back());
    if (left_ok && right_ok) return true;
  }
  return false;
}

bool mentions_ci(std::string_view haystack, std::string_view phrase) {
  return mentions(to_lower(haystack), to_lower(phrase));
}

bool contains_ci(std::string_view haystack, std::string_view needle) {
  return to_lower(haystack).find(to_lower(needle)) != std::string::npos;
}

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  return to_lower(trim(s)).starts_with(to_lower(prefix));
}

std::string find_any_ci(std::string_view haystack, std::span<const std::string> lexicon) {
  const std::string lowered = to_lower(haystack);
  for (const auto& phrase : lexicon) {
    if (!phrase.empty() && lowered.find(to_lower(phrase)) != std::string::npos) return phrase;
  }
  return {};
}

std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  std::string current;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c)) != 0) {
      current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else if (!current.empty()) {
      out.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

int leading_int(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size() && !std::isdigit(static_cast<unsigned char>(s[i]))) {
    if (!is_space(s[i])) return -1;
    ++i;
  }
  if (i == s.size()) return -1;
  int value = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
    value = value * 10 + (s[i] - '0');
    ++i;
  }
  return value;
}

std::string join(std::span<const std::string> parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

std::string redact_ci(std::string_view haystack, std::string_view needle, std::string_view mask) {
  if (needle.empty()) return std::string(haystack);
  const std::string lowered = to_lower(haystack);
  const std::string lowered_needle = to_lower(needle);
  std::string out;
  std::size_t cursor = 0;
  for (std::size_t pos = lowered.find(lowered_needle); pos != std::string::npos;
       pos = lowered.find(lowered_needle, cursor)) {
    out.append(haystack.substr(cursor, pos - cursor));
    out.append(mask);
    cursor = pos + needle.size();
  }
  out.append(haystack.substr(cursor));
  return out;
}

}  // namespace letgames::text
