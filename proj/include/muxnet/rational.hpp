#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace muxnet {

// Nonnegative exact fraction; enough for probabilities over enumerated sets.
struct Rational {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    Rational() = default;
    Rational(std::uint64_t n, std::uint64_t d) : num(n), den(d) {
        if (d == 0) throw std::invalid_argument("zero denominator");
        const auto g = std::gcd(n, d);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        if (num == 0) den = 1;
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const unsigned __int128 lhs = static_cast<unsigned __int128>(a.num) * b.den;
        const unsigned __int128 rhs = static_cast<unsigned __int128>(b.num) * a.den;
        return lhs <=> rhs;
    }
    friend bool operator==(const Rational& a, const Rational& b) { return a.num == b.num && a.den == b.den; }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.num << '/' << r.den; }
};

}  // namespace muxnet
