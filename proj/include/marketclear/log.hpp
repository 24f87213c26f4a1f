#pragma once

#include <string_view>

// Minimal leveled logging to stderr. The level comes from MARKETCLEAR_LOG
// (error | info | debug, default error), read once on first use.
namespace marketclear::log {

enum class Level { kError = 0, kInfo = 1, kDebug = 2 };

Level level();
void set_level(Level level);

void error(std::string_view message);
void info(std::string_view message);
void debug(std::string_view message);

}  // namespace marketclear::log
