#pragma once

#include <string_view>

namespace hybrid {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

/// Threshold from HYBRID_LOG_LEVEL (error, warn, info, debug); warn when unset.
LogLevel log_threshold();
void set_log_threshold(LogLevel level);
void log(LogLevel level, std::string_view message);

}  // namespace hybrid
