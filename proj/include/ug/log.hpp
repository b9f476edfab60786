#pragma once

#include <string>

namespace ug {

enum class LogLevel { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

void set_log_level(LogLevel level);
LogLevel log_level();

void log_error(const std::string& message);
void log_warn(const std::string& message);
void log_info(const std::string& message);
void log_debug(const std::string& message);

/// Parses "error" | "warn" | "info" | "debug"; throws on anything else.
LogLevel parse_log_level(const std::string& name);

}  // namespace ug
