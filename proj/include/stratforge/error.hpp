#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace stratforge {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input text (diffs, rule YAML, corpus lines). Carries the 1-based
// line where parsing stopped.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line)
        : Error(what + " (line " + std::to_string(line) + ")"), line(line) {}
    int line;
};

// Completion/embedding provider failure. retryable=false means retrying
// cannot help (e.g. an unscripted prompt in replay mode, which is a test bug).
class ProviderError : public Error {
public:
    ProviderError(const std::string& what, bool retryable, int attempts = 1)
        : Error(what), retryable(retryable), attempts(attempts) {}
    bool retryable;
    int attempts;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

enum class LogLevel { Debug = 0, Info = 1, Warn = 2, Quiet = 3 };

LogLevel& log_level();

inline void log_at(LogLevel lvl, const char* tag, const std::string& msg) {
    if (lvl >= log_level()) std::fprintf(stderr, "[%s] %s\n", tag, msg.c_str());
}
inline void log_warn(const std::string& msg) { log_at(LogLevel::Warn, "warn", msg); }
inline void log_info(const std::string& msg) { log_at(LogLevel::Info, "info", msg); }
inline void log_debug(const std::string& msg) { log_at(LogLevel::Debug, "debug", msg); }

} // namespace stratforge
