#pragma once

#include <cstddef>
#include <vector>

#include "muxnet/codec.hpp"
#include "muxnet/rational.hpp"

namespace muxnet {

// Joint law of (X, Z) on {0..x_size-1} x {0..z_size-1}, row-major in x.
struct JointDistribution {
    std::size_t x_size = 0;
    std::size_t z_size = 0;
    std::vector<double> p;

    double operator()(std::size_t x, std::size_t z) const { return p[x * z_size + z]; }

    // Throws DomainError unless entries are nonnegative and sum to 1 within 1e-9.
    void validate() const;

    // Symmetric Dirichlet(1) draw over the whole table.
    static JointDistribution dirichlet(std::size_t x_size, std::size_t z_size, Rng& rng);
};

// Explicit family of functions X -> S; functions[f][x] is the hash of x.
struct HashFamily {
    std::size_t input_size = 0;
    std::size_t output_size = 0;
    std::vector<std::vector<std::size_t>> functions;

    // max over x1 != x2 of Pr_f[f(x1) = f(x2)], exactly.
    Rational collision_probability() const;
    bool is_two_universal() const { return collision_probability() <= Rational(1, output_size); }

    // {alpha_I o L : L in GL(mn, q)} with X = F_q^mn and S = F_q^{k_I}, both
    // indexed by vector_index. Throws EnumerationTooLarge above cap.
    static HashFamily multiplex(const MultiplexLayout& layout, const Field& field, const Subset& subset,
                                std::uint64_t cap = 1u << 16);
};

struct InequalityCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

// E[P_{X|Z}(X|Z)^rho]
double expected_conditional_power(const JointDistribution& joint, double rho);

// I(f(X); Z) and H(f(X) | Z) in nats for one hash function.
double hashed_mutual_information(const JointDistribution& joint, const std::vector<std::size_t>& f,
                                 std::size_t output_size);
double hashed_conditional_entropy(const JointDistribution& joint, const std::vector<std::size_t>& f,
                                  std::size_t output_size);

// E_f exp(rho I(f(X); Z)) <= 1 + |S|^rho E[P_{X|Z}(X|Z)^rho]
InequalityCheck verify_theorem2(const JointDistribution& joint, const HashFamily& family, double rho,
                                double tolerance = 1e-12);

// E_f exp(-rho H(f(X) | Z)) <= |S|^-rho + E[P_{X|Z}(X|Z)^rho]
InequalityCheck verify_lemma1(const JointDistribution& joint, const HashFamily& family, double rho,
                              double tolerance = 1e-12);

}  // namespace muxnet
