// SPDX-License-Identifier: Apache-2.0
#include "letgames/logging.hpp"

#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

namespace letgames {

void configure_logging(std::string_view level) {
  auto logger = spdlog::get("letgames");
  if (!logger) logger = spdlog::stderr_color_mt("letgames");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::from_str(std::string(level)));
}

}  // namespace letgames
