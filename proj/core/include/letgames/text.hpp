// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace letgames::text {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);

/// Whole-word (or whole-phrase) occurrence, case-sensitive. Word characters are
/// ASCII alphanumerics and '_'; anything else is a boundary.
bool mentions(std::string_view haystack, std::string_view phrase);

/// Same as mentions() after lower-casing both sides.
bool mentions_ci(std::string_view haystack, std::string_view phrase);

bool contains_ci(std::string_view haystack, std::string_view needle);
bool starts_with_ci(std::string_view s, std::string_view prefix);

/// First phrase of `lexicon` found as a case-insensitive substring, or empty.
std::string find_any_ci(std::string_view haystack, std::span<const std::string> lexicon);

/// Lower-cased alphanumeric tokens.
std::vector<std::string> words(std::string_view s);

/// Leading integer of strings such as "5 items" or "3-4 rounds"; -1 when absent.
int leading_int(std::string_view s);

std::string join(std::span<const std::string> parts, std::string_view sep);

/// Replace every case-insensitive occurrence of `needle` by `mask`.
std::string redact_ci(std::string_view haystack, std::string_view needle, std::string_view mask);

}  // namespace letgames::text
