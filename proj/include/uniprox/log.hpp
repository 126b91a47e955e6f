#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace uniprox {

enum class LogLevel { Off = 0, Info = 1, Debug = 2 };

// Level comes from UNIPROX_LOG in {off, info, debug}; read once.
inline LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("UNIPROX_LOG");
    if (env == nullptr) return LogLevel::Off;
    if (std::strcmp(env, "debug") == 0) return LogLevel::Debug;
    if (std::strcmp(env, "info") == 0) return LogLevel::Info;
    return LogLevel::Off;
  }();
  return level;
}

template <typename... Args>
void log_info(const char* fmt, Args... args) {
  if (log_level() >= LogLevel::Info) {
    std::fprintf(stderr, "[uniprox] ");
    std::fprintf(stderr, fmt, args...);
    std::fprintf(stderr, "\n");
  }
}

template <typename... Args>
void log_debug(const char* fmt, Args... args) {
  if (log_level() >= LogLevel::Debug) {
    std::fprintf(stderr, "[uniprox:debug] ");
    std::fprintf(stderr, fmt, args...);
    std::fprintf(stderr, "\n");
  }
}

}  // namespace uniprox
