#include "appauth/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace appauth::log {
namespace {

std::atomic<Level> g_level{Level::Warn};
std::mutex g_mutex;

void emit(std::string_view tag, std::string_view message) {
    std::lock_guard lock(g_mutex);
    std::clog << tag << message << '\n';
}

}  // namespace

void set_level(Level l) { g_level.store(l); }
Level level() { return g_level.load(); }

void warn(std::string_view message) {
    if (g_level.load() >= Level::Warn) emit("warning: ", message);
}

void info(std::string_view message) {
    if (g_level.load() >= Level::Info) emit("", message);
}

}  // namespace appauth::log
