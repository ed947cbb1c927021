#include "hybrid/log.h"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

namespace hybrid {

namespace {

LogLevel from_env() {
    const char* v = std::getenv("HYBRID_LOG_LEVEL");
    if (!v) return LogLevel::Warn;
    const std::string s(v);
    if (s == "error") return LogLevel::Error;
    if (s == "info") return LogLevel::Info;
    if (s == "debug") return LogLevel::Debug;
    return LogLevel::Warn;
}

std::atomic<int>& threshold() {
    static std::atomic<int> t{static_cast<int>(from_env())};
    return t;
}

constexpr const char* kNames[] = {"error", "warn", "info", "debug"};

}  // namespace

LogLevel log_threshold() { return static_cast<LogLevel>(threshold().load()); }

void set_log_threshold(LogLevel level) { threshold().store(static_cast<int>(level)); }

void log(LogLevel level, std::string_view message) {
    if (static_cast<int>(level) > threshold().load()) return;
    static std::mutex mu;
    std::lock_guard lock(mu);
    std::cerr << "[" << kNames[static_cast<int>(level)] << "] " << message << '\n';
}

}  // namespace hybrid
