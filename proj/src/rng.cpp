#include "lomef/rng.hpp"

#include <cmath>
#include <numbers>

namespace lomef {

RngSeed derive_seed(RngSeed seed, std::uint64_t stream) {
    std::uint64_t z = seed.value + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return RngSeed{z ^ (z >> 31)};
}

std::size_t Rng::uniform_index(std::size_t n) {
    // rejection sampling keeps the draw exactly uniform
    const std::uint64_t bound = std::uint64_t(n);
    const std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % bound);
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return std::size_t(x % bound);
}

double Rng::uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

}  // namespace lomef
