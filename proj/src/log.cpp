#include "lomef/log.hpp"

#include <iostream>
#include <mutex>

namespace lomef::log {
namespace {

std::mutex& sink_mutex() {
    static std::mutex m;
    return m;
}

Sink& current_sink() {
    static Sink sink = [](Level level, std::string_view message) {
        if (level == Level::Warning) std::cerr << "warning: " << message << '\n';
    };
    return sink;
}

void emit(Level level, std::string_view message) {
    std::lock_guard lock(sink_mutex());
    if (current_sink()) current_sink()(level, message);
}

}  // namespace

Sink set_sink(Sink sink) {
    std::lock_guard lock(sink_mutex());
    Sink previous = std::move(current_sink());
    current_sink() = std::move(sink);
    return previous;
}

void info(std::string_view message) { emit(Level::Info, message); }
void warn(std::string_view message) { emit(Level::Warning, message); }

}  // namespace lomef::log
