// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

namespace letgames {

/// Routes engine logs to stderr at `level` ("debug", "info", "warn", "error", "off").
void configure_logging(std::string_view level);

}  // namespace letgames
