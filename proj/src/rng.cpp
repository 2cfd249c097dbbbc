#include "muxnet/rng.hpp"

#include <cmath>

namespace muxnet {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t Rng::uniform(std::uint64_t bound) {
    // Rejection on the top of the range keeps the draw exactly uniform.
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t r;
    do {
        r = next();
    } while (r >= limit);
    return r % bound;
}

double Rng::exponential() {
    double u;
    do {
        u = uniform_real();
    } while (u == 0.0);
    return -std::log(u);
}

Rng Rng::split(std::string_view label, std::uint64_t index) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return Rng(splitmix64(splitmix64(seed_ ^ h) + index));
}

}  // namespace muxnet
