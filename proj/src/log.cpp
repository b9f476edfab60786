#include "ug/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>
#include <stdexcept>

namespace ug {

namespace {

std::atomic<LogLevel> g_level{LogLevel::kWarn};
std::mutex g_mutex;  // keeps concurrent lines intact

void emit(LogLevel level, const char* tag, const std::string& message) {
  if (static_cast<int>(level) > static_cast<int>(g_level.load())) return;
  std::lock_guard<std::mutex> lock(g_mutex);
  std::cerr << tag << message << "\n";
}

}  // namespace

void set_log_level(LogLevel level) { g_level.store(level); }
LogLevel log_level() { return g_level.load(); }

void log_error(const std::string& message) { emit(LogLevel::kError, "[error] ", message); }
void log_warn(const std::string& message) { emit(LogLevel::kWarn, "[warn] ", message); }
void log_info(const std::string& message) { emit(LogLevel::kInfo, "[info] ", message); }
void log_debug(const std::string& message) { emit(LogLevel::kDebug, "[debug] ", message); }

LogLevel parse_log_level(const std::string& name) {
  if (name == "error") return LogLevel::kError;
  if (name == "warn") return LogLevel::kWarn;
  if (name == "info") return LogLevel::kInfo;
  if (name == "debug") return LogLevel::kDebug;
  throw std::invalid_argument("unknown log level '" + name + "'");
}

}  // namespace ug
