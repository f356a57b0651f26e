// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "letgames/error.hpp"

namespace letgames {

// Specialize with `static constexpr std::array<std::pair<E, std::string_view>, N> values`.
template <typename E>
struct EnumNames;

template <typename E>
constexpr std::string_view enum_name(E value) {
  for (const auto& [v, name] : EnumNames<E>::values) {
    if (v == value) return name;
  }
  return "?";
}

template <typename E>
constexpr std::optional<E> enum_parse(std::string_view name) {
  for (const auto& [v, n] : EnumNames<E>::values) {
    if (n == name) return v;
  }
  return std::nullopt;
}

template <typename E>
E enum_require(std::string_view name, std::string_view what) {
  if (auto v = enum_parse<E>(name)) return *v;
  std::string allowed;
  for (const auto& [v, n] : EnumNames<E>::values) {
    if (!allowed.empty()) allowed += "|";
    allowed += n;
  }
  throw Error(ErrorCode::parse_error,
              "unknown " + std::string(what) + " '" + std::string(name) + "' (expected " + allowed + ")");
}

}  // namespace letgames
