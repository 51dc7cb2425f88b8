#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace lomef {

struct RngSeed {
    std::uint64_t value = 0;

    friend bool operator==(RngSeed, RngSeed) = default;
};

/// Mixes a stream index into a seed (splitmix64 finaliser). Used to give every
/// series job and every run its own independent stream.
RngSeed derive_seed(RngSeed seed, std::uint64_t stream);

/// Deterministic generator. The engine is mt19937_64 (bit-exact across
/// standard libraries); the distributions are implemented here rather than
/// taken from <random> because those are implementation-defined.
class Rng {
  public:
    explicit Rng(RngSeed seed) : engine_(seed.value) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, n). n must be positive.
    std::size_t uniform_index(std::size_t n);

    /// Uniform real in [0, 1) with 53 random bits.
    double uniform();

    /// Standard normal via Box-Muller.
    double normal();

  private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace lomef
