#include "marketclear/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <string>

namespace marketclear::log {

namespace {

Level from_environment() {
  const char* raw = std::getenv("MARKETCLEAR_LOG");
  if (raw == nullptr) return Level::kError;
  const std::string value(raw);
  if (value == "debug") return Level::kDebug;
  if (value == "info") return Level::kInfo;
  return Level::kError;
}

std::atomic<int>& current() {
  static std::atomic<int> lvl{static_cast<int>(from_environment())};
  return lvl;
}

void emit(Level at, std::string_view tag, std::string_view message) {
  if (static_cast<int>(at) > current().load(std::memory_order_relaxed)) return;
  std::cerr << "[" << tag << "] " << message << '\n';
}

}  // namespace

Level level() { return static_cast<Level>(current().load()); }
void set_level(Level lvl) { current().store(static_cast<int>(lvl)); }

void error(std::string_view message) { emit(Level::kError, "error", message); }
void info(std::string_view message) { emit(Level::kInfo, "info", message); }
void debug(std::string_view message) { emit(Level::kDebug, "debug", message); }

}  // namespace marketclear::log
