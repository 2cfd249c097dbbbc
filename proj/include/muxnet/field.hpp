#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace muxnet {

// Field element. An element of F_q with q = p^e is stored as the integer
// sum_i c_i p^i, where c_i is the coefficient of x^i in its polynomial basis
// representation modulo the field's defining polynomial.
using Symbol = std::uint32_t;

inline constexpr std::uint32_t kMaxFieldSize = 1u << 16;

// Finite field F_q for q = p^e <= 2^16.
//
// Prime fields use integer arithmetic mod p. Extension fields multiply through
// log/antilog tables built from a primitive element of F_p[x]/(modulus).
// Copies are cheap and share the immutable tables.
class Field {
public:
    // F_q with the default modulus when q is not prime. Throws InvalidField
    // if q is not a prime power in [2, 2^16].
    static Field of_size(std::uint32_t q);

    // F_{p^e} with an explicit monic modulus of degree e, coefficients listed
    // from x^0 up to x^e. Throws InvalidField if the modulus is not irreducible.
    static Field with_modulus(std::uint32_t q, std::vector<std::uint32_t> modulus);

    // Smallest monic irreducible polynomial of degree e over F_p in
    // lexicographic order of (c_{e-1}, ..., c_0), except for the shipped binary
    // table q in {4, ..., 256}.
    static std::vector<std::uint32_t> default_modulus(std::uint32_t p, std::uint32_t e);

    std::uint32_t q() const { return t_->q; }
    std::uint32_t characteristic() const { return t_->p; }
    std::uint32_t degree() const { return t_->e; }
    bool is_prime() const { return t_->e == 1; }
    const std::vector<std::uint32_t>& modulus() const { return t_->modulus; }

    bool valid(Symbol a) const { return a < t_->q; }

    Symbol add(Symbol a, Symbol b) const {
        const Tables& t = *t_;
        if (t.e == 1) {
            const Symbol s = a + b;
            return s >= t.q ? s - t.q : s;
        }
        if (t.p == 2) return a ^ b;
        return add_digits(a, b);
    }
    Symbol sub(Symbol a, Symbol b) const { return add(a, neg(b)); }
    Symbol neg(Symbol a) const {
        const Tables& t = *t_;
        if (t.e == 1) return a == 0 ? 0 : t.q - a;
        if (t.p == 2) return a;
        return neg_digits(a);
    }
    Symbol mul(Symbol a, Symbol b) const {
        const Tables& t = *t_;
        if (t.e == 1) return static_cast<Symbol>(static_cast<std::uint64_t>(a) * b % t.q);
        if (a == 0 || b == 0) return 0;
        return t.exp[t.log[a] + t.log[b]];
    }
    // Throws DivisionByZero for a == 0.
    Symbol inv(Symbol a) const;
    Symbol div(Symbol a, Symbol b) const { return mul(a, inv(b)); }
    Symbol pow(Symbol a, std::uint64_t k) const;

    // Natural log of q; the unit in which leakage is quantized.
    double log_q() const { return t_->log_q; }

    std::string describe() const;

    friend bool operator==(const Field& a, const Field& b) {
        return a.t_ == b.t_ || (a.t_->q == b.t_->q && a.t_->modulus == b.t_->modulus);
    }

private:
    struct Tables {
        std::uint32_t q = 0, p = 0, e = 0;
        std::vector<std::uint32_t> modulus;
        std::vector<std::uint32_t> exp;  // extension only, length 2(q-1)
        std::vector<std::uint32_t> log;  // extension only, length q
        std::vector<std::uint32_t> inv;  // length q, inv[0] unused
        double log_q = 0.0;
    };

    Symbol add_digits(Symbol a, Symbol b) const;
    Symbol neg_digits(Symbol a) const;

    explicit Field(std::shared_ptr<const Tables> t) : t_(std::move(t)) {}
    static Field build(std::uint32_t q, std::uint32_t p, std::uint32_t e,
                       std::vector<std::uint32_t> modulus);

    std::shared_ptr<const Tables> t_;
};

// Decomposition q = p^e; returns false if q is not a prime power.
bool prime_power(std::uint32_t q, std::uint32_t& p, std::uint32_t& e);
bool is_prime(std::uint32_t n);

// Irreducibility of a monic polynomial over F_p (Rabin's test).
bool is_irreducible(std::span<const std::uint32_t> poly, std::uint32_t p);

// Free-function aliases of the Field members.
inline Symbol ff_add(Symbol a, Symbol b, const Field& f) { return f.add(a, b); }
inline Symbol ff_mul(Symbol a, Symbol b, const Field& f) { return f.mul(a, b); }
inline Symbol ff_inv(Symbol a, const Field& f) { return f.inv(a); }

}  // namespace muxnet
