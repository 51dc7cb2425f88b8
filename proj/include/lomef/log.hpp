#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace lomef::log {

enum class Level { Info, Warning };

using Sink = std::function<void(Level, std::string_view)>;

/// Replaces the process-wide sink and returns the previous one. The default
/// sink writes warnings to stderr and drops info messages.
Sink set_sink(Sink sink);

void info(std::string_view message);
void warn(std::string_view message);

/// Installs a sink for the lifetime of the object, restoring the old one after.
class ScopedSink {
  public:
    explicit ScopedSink(Sink sink) : previous_(set_sink(std::move(sink))) {}
    ~ScopedSink() { set_sink(std::move(previous_)); }
    ScopedSink(const ScopedSink&) = delete;
    ScopedSink& operator=(const ScopedSink&) = delete;

  private:
    Sink previous_;
};

}  // namespace lomef::log
