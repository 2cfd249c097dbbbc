#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "muxnet/leakage.hpp"

namespace muxnet {

// rho in (0, 1]; C1, C2 > 2 (2^T - 1).
struct BoundParams {
    double rho = 1.0;
    double C1 = 5.0;
    double C2 = 5.0;

    // C1 = C2 = 4 (2^T - 1) + 1.
    static BoundParams defaults(std::size_t T);
    // Throws DomainError when the constraints fail for T messages.
    void validate(std::size_t T) const;
};

// Smallest round choice above the Markov threshold: 4 (2^T - 1) + 1.
double default_markov_constant(std::size_t T);
// C2 with 1 - 2 (2^T - 1)/C2 > 1 - 1/C_E: 2 (2^T - 1) C_E + 1.
double certification_C2(std::size_t T, std::uint64_t set_count);

// q^{-m rho (n - mu - k_I/m)}
double decay_term(const MultiplexLayout& layout, std::size_t k_subset, std::size_t mu, double rho);

// 1 + q^{-m rho (n - mu - k_I/m)}, the bound on E_l exp(rho I).
double ub2_bound(const MultiplexLayout& layout, const Subset& subset, std::size_t mu, double rho);

struct UbBounds {
    double ub2 = 0.0;  // 1 + decay
    double ub5 = 0.0;  // C1 decay / rho: E_b I for a good l
    double ub6 = 0.0;  // C1 (1 + decay): E_b exp(rho I) for a good l
    double ub8 = 0.0;  // C1 C2 decay / rho: I for a good (l, b)
    std::optional<double> ub7;  // per-slot E_b I / m, only when k_I/m >= n - mu
    std::optional<double> ub9;  // per-slot I / m, same domain
    double prob_l = 0.0;   // 1 - 2 (2^T - 1)/C1
    double prob_lb = 0.0;  // 1 - 2 (2^T - 1)/C2
};

UbBounds ub_bounds(const MultiplexLayout& layout, const Subset& subset, std::size_t mu, const BoundParams& params);

// (1 + ln C1)/(m rho) + (k_I/m - (n - mu)) ln q. Throws DomainError when
// k_I/m < n - mu.
double ub7_bound(const MultiplexLayout& layout, const Subset& subset, std::size_t mu, const BoundParams& params);
// (1 + ln C2 + ln C1)/(m rho) + (k_I/m - (n - mu)) ln q, same domain.
double ub9_bound(const MultiplexLayout& layout, const Subset& subset, std::size_t mu, const BoundParams& params);

// max{0, k_I - mn + rank_B} ln q: H(S_I | bX) <= (mn - rank b) ln q forces at
// least this much leakage.
double leakage_floor(const MultiplexLayout& layout, const Subset& subset, std::size_t rank_B);

// R_i >= 0 for all i and sum R_i <= n.
bool capacity_membership(const std::vector<double>& rates, double n);

// Asymptotic per-slot leakage floor max{0, sum_{i in I} R_i - (n - mu)}.
double rate_leakage_floor(const std::vector<double>& rates, const Subset& subset, double n, double mu);

struct SubsetGuarantee {
    Subset subset;
    double ub5 = 0.0;
    double ub6 = 0.0;
    std::size_t good = 0;             // L meeting both bounds for this subset
    double mean_expected_nats = 0.0;  // mean over L of E_b I
    double max_expected_nats = 0.0;
};

struct GuaranteeResult {
    std::size_t trials = 0;
    std::size_t good = 0;  // L meeting both bounds for every subset
    double fraction_good = 0.0;
    double prob_l = 0.0;
    double sigma = 0.0;    // binomial sd of the fraction at success probability prob_l
    std::vector<SubsetGuarantee> per_subset;

    // fraction_good >= prob_l - 3 sigma
    bool meets_guarantee() const;
};

// Samples L_trials independent L. An L is good when for every nonempty I,
// E_b I <= ub5 and E_b exp(rho I) <= ub6, E_b taken exactly over the uniform
// distribution on traditional eavesdropper sets.
GuaranteeResult guarantee_experiment(const MultiplexLayout& layout, const Network& net, const LocalCoding& coding,
                                     std::size_t mu, const BoundParams& params, Rng& rng, std::size_t L_trials);

struct CertificationWitness {
    Subset subset;
    LinkSet set;
    double nats = 0.0;
};

struct CertificationResult {
    bool certified = false;
    std::vector<Subset> applicable;  // subsets in scope
    std::vector<double> ub8;         // per nonempty subset, bitmask order
    std::vector<double> worst_nats;  // per nonempty subset, bitmask order
    std::optional<CertificationWitness> witness;
};

// Which subsets must show zero leakage: those whose ub8 falls below ln q
// (a quantized leakage under that bound is forced to zero), or all of them.
enum class CertificationScope { BoundImplied, AllSubsets };

// Certified iff every subset in scope has zero leakage under every
// traditional eavesdropper set. With BoundImplied and no subset in scope the
// result is vacuously certified.
CertificationResult certify_universal_zero(const MultiplexLayout& layout, const Network& net,
                                           const LocalCoding& coding, std::size_t mu, const BoundParams& params,
                                           const Matrix& L,
                                           CertificationScope scope = CertificationScope::BoundImplied);

}  // namespace muxnet
