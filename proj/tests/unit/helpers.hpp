#pragma once

#include <doctest.h>

#include <initializer_list>
#include <string>
#include <vector>

#include "lomef/core.hpp"
#include "lomef/log.hpp"

namespace testing {

inline lomef::Vector vec(std::initializer_list<double> v) {
    return lomef::from_std(std::vector<double>(v));
}

/// Kind of the lomef::Error thrown by f; fails the test when nothing is thrown.
template <typename F>
lomef::ErrorKind kind_of(F&& f) {
    try {
        f();
    } catch (const lomef::Error& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return lomef::ErrorKind::InvalidArgument;
}

/// Collects warnings for the lifetime of the object.
struct WarningCapture {
    std::vector<std::string> messages;
    lomef::log::ScopedSink sink{[this](lomef::log::Level level, std::string_view m) {
        if (level == lomef::log::Level::Warning) messages.emplace_back(m);
    }};

    bool contains(const std::string& fragment) const {
        for (const auto& m : messages) {
            if (m.find(fragment) != std::string::npos) return true;
        }
        return false;
    }
};

}  // namespace testing
