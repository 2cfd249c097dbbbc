#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace muxnet {

// Seeded generator with platform-independent draws. std::uniform_*_distribution
// is implementation-defined, so integer and real draws are derived here directly
// from the 64-bit engine output.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed), seed_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform integer in [0, bound). bound must be nonzero.
    std::uint64_t uniform(std::uint64_t bound);

    // Uniform real in [0, 1) with 53 random bits.
    double uniform_real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Standard exponential variate (used for Dirichlet draws).
    double exponential();

    // Independent child stream keyed by a label and an index. The child seed
    // depends only on this stream's seed, so the result does not depend on how
    // many values were drawn before the split.
    Rng split(std::string_view label, std::uint64_t index = 0) const;

    std::uint64_t seed() const { return seed_; }

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace muxnet
