// SPDX-License-Identifier: Apache-2.0
#include "letgames/prompts.hpp"

#include <utility>

#include "letgames/error.hpp"

namespace letgames::detail {
extern const std::pair<std::string_view, std::string_view> kPromptAssets[];
extern const std::size_t kPromptAssetCount;
}  // namespace letgames::detail

namespace letgames::prompts {

std::string_view get(std::string_view name) {
  for (std::size_t i = 0; i < detail::kPromptAssetCount; ++i) {
    if (detail::kPromptAssets[i].first == name) return detail::kPromptAssets[i].second;
  }
  throw Error(ErrorCode::not_found, "no prompt named '" + std::string(name) + "'");
}

std::vector<std::string> names() {
  std::vector<std::string> out;
  out.reserve(detail::kPromptAssetCount);
  for (std::size_t i = 0; i < detail::kPromptAssetCount; ++i) out.emplace_back(detail::kPromptAssets[i].first);
  return out;
}

std::string render(std::string_view tpl, const std::map<std::string, std::string>& vars) {
  std::string out;
  out.reserve(tpl.size());
  std::size_t i = 0;
  while (i < tpl.size()) {
    if (tpl[i] == '{') {
      auto close = tpl.find('}', i + 1);
      if (close != std::string_view::npos) {
        auto it = vars.find(std::string(tpl.substr(i + 1, close - i - 1)));
        if (it != vars.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out += tpl[i++];
  }
  return out;
}

}  // namespace letgames::prompts
