#pragma once

#include <chrono>
#include <memory>
#include <mutex>
#include <string>

#include "lomef/gfm.hpp"

namespace lomef {

/// Adapter for a global model living in another process. The child is spawned
/// through /bin/sh and spoken to with one request line per call:
///
///   FORECAST,h,v1,...,vT   ->  f1,...,fh
///   FIT,v1,...,vT          ->  T - n comma-separated fitted values
///
/// Responses are taken to be on the original scale; only the dataset's
/// rounding/clamping flags are applied on top.
class ExternalProcessModel final : public GlobalModel {
  public:
    struct Options {
        int input_length = 1;
        std::chrono::milliseconds timeout{5000};
        OutputFlags flags;
    };

    ExternalProcessModel(std::string command, Options options);
    ~ExternalProcessModel() override;

    ExternalProcessModel(const ExternalProcessModel&) = delete;
    ExternalProcessModel& operator=(const ExternalProcessModel&) = delete;

    int input_length() const override { return options_.input_length; }
    Vector forecast(const Vector& history, int horizon) const override;
    Vector one_step_fit(const Vector& values) const override;
    std::string name() const override { return "external"; }

    /// Running child process (implementation detail).
    struct Process;

  private:
    std::string request(const std::string& line) const;

    std::string command_;
    Options options_;
    mutable std::mutex mutex_;
    mutable std::unique_ptr<Process> process_;
};

/// Parses a comma-separated list of reals; throws ProtocolError on junk.
Vector parse_response(const std::string& line, Eigen::Index expected);

}  // namespace lomef
