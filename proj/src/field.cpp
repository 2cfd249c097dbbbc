#include "muxnet/field.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "muxnet/error.hpp"

namespace muxnet {

namespace {

using Poly = std::vector<std::uint32_t>;

std::uint32_t mod_pow(std::uint64_t base, std::uint64_t k, std::uint32_t p) {
    std::uint64_t r = 1 % p;
    base %= p;
    while (k) {
        if (k & 1) r = r * base % p;
        base = base * base % p;
        k >>= 1;
    }
    return static_cast<std::uint32_t>(r);
}

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

// a mod f over F_p, f monic.
Poly poly_mod(Poly a, const Poly& f, std::uint32_t p) {
    trim(a);
    const std::size_t df = f.size() - 1;
    while (a.size() > df) {
        const std::uint64_t c = a.back();
        const std::size_t shift = a.size() - 1 - df;
        for (std::size_t i = 0; i <= df; ++i) {
            const std::uint64_t sub = c * f[i] % p;
            a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - sub) % p);
        }
        trim(a);
    }
    return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, std::uint32_t p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = static_cast<std::uint32_t>(
                (r[i + j] + static_cast<std::uint64_t>(a[i]) * b[j]) % p);
    return poly_mod(std::move(r), f, p);
}

Poly poly_powmod(Poly base, std::uint64_t k, const Poly& f, std::uint32_t p) {
    Poly r = poly_mod(Poly{1}, f, p);
    base = poly_mod(std::move(base), f, p);
    while (k) {
        if (k & 1) r = poly_mulmod(r, base, f, p);
        base = poly_mulmod(base, base, f, p);
        k >>= 1;
    }
    return r;
}

Poly poly_gcd(Poly a, Poly b, std::uint32_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        // Make b monic so poly_mod applies.
        const std::uint32_t lead_inv = mod_pow(b.back(), p - 2, p);
        for (auto& c : b) c = static_cast<std::uint32_t>(static_cast<std::uint64_t>(c) * lead_inv % p);
        Poly r = poly_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

std::vector<std::uint32_t> prime_factors(std::uint32_t n) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

Poly to_poly(std::uint32_t v, std::uint32_t p, std::uint32_t e) {
    Poly a(e, 0);
    for (std::uint32_t i = 0; i < e; ++i) {
        a[i] = v % p;
        v /= p;
    }
    trim(a);
    return a;
}

std::uint32_t from_poly(const Poly& a, std::uint32_t p) {
    std::uint32_t v = 0;
    for (std::size_t i = a.size(); i-- > 0;) v = v * p + a[i];
    return v;
}

const std::map<std::uint32_t, Poly>& binary_table() {
    static const std::map<std::uint32_t, Poly> table = {
        {4, {1, 1, 1}},                   // x^2 + x + 1
        {8, {1, 1, 0, 1}},                // x^3 + x + 1
        {16, {1, 1, 0, 0, 1}},            // x^4 + x + 1
        {32, {1, 0, 1, 0, 0, 1}},         // x^5 + x^2 + 1
        {64, {1, 1, 0, 0, 0, 0, 1}},      // x^6 + x + 1
        {128, {1, 1, 0, 0, 0, 0, 0, 1}},  // x^7 + x + 1
        {256, {1, 0, 1, 1, 1, 0, 0, 0, 1}},  // x^8 + x^4 + x^3 + x^2 + 1
    };
    return table;
}

}  // namespace

bool is_prime(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint32_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

bool prime_power(std::uint32_t q, std::uint32_t& p, std::uint32_t& e) {
    if (q < 2) return false;
    const auto f = prime_factors(q);
    if (f.size() != 1) return false;
    p = f[0];
    e = 0;
    while (q > 1) {
        q /= p;
        ++e;
    }
    return true;
}

bool is_irreducible(std::span<const std::uint32_t> poly, std::uint32_t p) {
    Poly f(poly.begin(), poly.end());
    trim(f);
    if (f.size() < 2 || f.back() != 1) return false;
    const std::uint32_t e = static_cast<std::uint32_t>(f.size() - 1);
    if (e == 1) return true;
    const Poly x{0, 1};
    // h_k = x^(p^k) mod f
    std::vector<Poly> h(e + 1);
    h[0] = poly_mod(x, f, p);
    for (std::uint32_t k = 1; k <= e; ++k) h[k] = poly_powmod(h[k - 1], p, f, p);
    if (h[e] != poly_mod(x, f, p)) return false;
    for (std::uint32_t r : prime_factors(e)) {
        Poly d = h[e / r];
        d.resize(std::max<std::size_t>(d.size(), 2), 0);
        d[1] = (d[1] + p - 1) % p;
        trim(d);
        const Poly g = poly_gcd(f, d, p);
        if (g.size() != 1) return false;
    }
    return true;
}

std::vector<std::uint32_t> Field::default_modulus(std::uint32_t p, std::uint32_t e) {
    if (e < 2) return {};
    if (p == 2) {
        const auto it = binary_table().find(1u << e);
        if (it != binary_table().end()) return it->second;
    }
    // idx in base p holds c_0 as its least significant digit.
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < e; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        Poly f(e + 1, 0);
        std::uint64_t v = idx;
        for (std::uint32_t i = 0; i < e; ++i) {
            f[i] = static_cast<std::uint32_t>(v % p);
            v /= p;
        }
        f[e] = 1;
        if (f[0] == 0) continue;
        if (is_irreducible(f, p)) return f;
    }
    throw InvalidField("no irreducible polynomial found");
}

Field Field::of_size(std::uint32_t q) {
    std::uint32_t p = 0, e = 0;
    if (q > kMaxFieldSize || !prime_power(q, p, e))
        throw InvalidField("field size " + std::to_string(q) + " is not a prime power <= 65536");
    return build(q, p, e, default_modulus(p, e));
}

Field Field::with_modulus(std::uint32_t q, std::vector<std::uint32_t> modulus) {
    std::uint32_t p = 0, e = 0;
    if (q > kMaxFieldSize || !prime_power(q, p, e))
        throw InvalidField("field size " + std::to_string(q) + " is not a prime power <= 65536");
    if (e == 1) {
        if (!modulus.empty())
            throw InvalidField("prime field GF(" + std::to_string(q) + ") takes no modulus");
        return build(q, p, e, {});
    }
    if (modulus.size() != e + 1 || modulus.back() != 1)
        throw InvalidField("modulus must be monic of degree " + std::to_string(e));
    for (auto c : modulus)
        if (c >= p) throw InvalidField("modulus coefficient out of range");
    if (!is_irreducible(modulus, p)) throw InvalidField("modulus is reducible over GF(" + std::to_string(p) + ")");
    return build(q, p, e, std::move(modulus));
}

Field Field::build(std::uint32_t q, std::uint32_t p, std::uint32_t e, std::vector<std::uint32_t> modulus) {
    auto t = std::make_shared<Tables>();
    t->q = q;
    t->p = p;
    t->e = e;
    t->modulus = std::move(modulus);
    t->log_q = std::log(static_cast<double>(q));
    t->inv.assign(q, 0);
    if (e == 1) {
        for (std::uint32_t a = 1; a < q; ++a) t->inv[a] = mod_pow(a, q - 2, q);
        return Field(std::move(t));
    }

    const Poly& f = t->modulus;
    auto slow_mul = [&](std::uint32_t a, std::uint32_t b) {
        return from_poly(poly_mulmod(to_poly(a, p, e), to_poly(b, p, e), f, p), p);
    };
    auto slow_pow = [&](std::uint32_t a, std::uint64_t k) {
        std::uint32_t r = 1;
        while (k) {
            if (k & 1) r = slow_mul(r, a);
            a = slow_mul(a, a);
            k >>= 1;
        }
        return r;
    };
    const auto factors = prime_factors(q - 1);
    std::uint32_t gen = 0;
    for (std::uint32_t g = 2; g < q && gen == 0; ++g) {
        bool primitive = true;
        for (auto r : factors)
            if (slow_pow(g, (q - 1) / r) == 1) {
                primitive = false;
                break;
            }
        if (primitive) gen = g;
    }
    if (gen == 0) throw InvalidField("no primitive element; modulus not irreducible");

    t->exp.assign(2 * (q - 1), 0);
    t->log.assign(q, 0);
    std::uint32_t v = 1;
    for (std::uint32_t i = 0; i < q - 1; ++i) {
        t->exp[i] = v;
        t->exp[i + q - 1] = v;
        t->log[v] = i;
        v = slow_mul(v, gen);
    }
    for (std::uint32_t a = 1; a < q; ++a) t->inv[a] = t->exp[(q - 1 - t->log[a]) % (q - 1)];
    return Field(std::move(t));
}

Symbol Field::add_digits(Symbol a, Symbol b) const {
    const auto& t = *t_;
    Symbol r = 0, scale = 1;
    for (std::uint32_t i = 0; i < t.e; ++i) {
        r += ((a % t.p + b % t.p) % t.p) * scale;
        a /= t.p;
        b /= t.p;
        scale *= t.p;
    }
    return r;
}

Symbol Field::neg_digits(Symbol a) const {
    const auto& t = *t_;
    Symbol r = 0, scale = 1;
    for (std::uint32_t i = 0; i < t.e; ++i) {
        r += ((t.p - a % t.p) % t.p) * scale;
        a /= t.p;
        scale *= t.p;
    }
    return r;
}

Symbol Field::inv(Symbol a) const {
    if (a == 0) throw DivisionByZero("inverse of zero in " + describe());
    return t_->inv[a];
}

Symbol Field::pow(Symbol a, std::uint64_t k) const {
    Symbol r = 1;
    while (k) {
        if (k & 1) r = mul(r, a);
        a = mul(a, a);
        k >>= 1;
    }
    return r;
}

std::string Field::describe() const {
    std::ostringstream os;
    os << "GF(" << t_->q << ")";
    if (t_->e > 1) {
        os << " mod [";
        for (std::size_t i = 0; i < t_->modulus.size(); ++i) os << (i ? "," : "") << t_->modulus[i];
        os << "]";
    }
    return os.str();
}

}  // namespace muxnet
