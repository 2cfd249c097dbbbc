#pragma once

#include <cstddef>
#include <vector>

#include "muxnet/codec.hpp"
#include "muxnet/eavesdropper.hpp"

namespace muxnet {

// I(S_I ; BX | B = b, L = l) in nats for uniform, independent messages.
struct LeakageResult {
    Subset subset;
    std::size_t k_subset = 0;     // k_I
    std::size_t rank_B = 0;
    std::size_t kernel_dim = 0;   // dim alpha_I(ker(B L^{-1}))
    double nats = 0.0;            // (k_I - kernel_dim) ln q
    double conditional_entropy_nats = 0.0;  // kernel_dim ln q

    std::size_t leaked_symbols() const { return k_subset - kernel_dim; }
    double bits() const;
};

// Given Eve's observation z = B L^{-1} s, the message vectors consistent with
// z form a coset of ker(B L^{-1}), and S_I is uniform on the projection of that
// coset. Its size q^kernel_dim is the same for every z, so the leakage is
// (k_I - kernel_dim) ln q. The coset shift itself is never needed.
LeakageResult exact_leakage(const MultiplexLayout& layout, const Matrix& L, const Matrix& B, const Subset& subset);

// Same with a precomputed L^{-1}.
LeakageResult exact_leakage_from_inverse(const MultiplexLayout& layout, const Matrix& L_inverse, const Matrix& B,
                                         const Subset& subset);

// Mutual information of (alpha_I(s), B L^{-1} s) by enumerating all q^mn
// equiprobable message vectors. Walks x over F_q^mn and sets s = L x, so it
// never inverts L. Throws EnumerationTooLarge when q^mn > cap.
double brute_force_leakage(const MultiplexLayout& layout, const Matrix& L, const Matrix& B, const Subset& subset,
                           std::uint64_t cap = 1u << 16);

struct AverageLeakage {
    double mean_nats = 0.0;
    double mean_exp_rho = 0.0;  // E_b exp(rho I)
    std::size_t samples = 0;
    bool exhaustive = false;
};

// E_b I and E_b exp(rho I) over the eavesdropper model. Exact (weighted
// enumeration) when the model's support has at most exhaustive_cap elements,
// otherwise a Monte Carlo mean over trials draws. net and coding may be null
// for the direct kind.
AverageLeakage average_leakage(const MultiplexLayout& layout, const Matrix& L, const EavesdropperModel& model,
                               const Network* net, const LocalCoding* coding, const Subset& subset, Rng& rng,
                               std::size_t trials, double rho = 1.0, std::uint64_t exhaustive_cap = 1u << 16);

struct WorstCaseLeakage {
    double max_nats = 0.0;
    LinkSet argmax;
    std::vector<LinkSet> sets;
    std::vector<LeakageResult> per_set;  // aligned with sets
};

// Maximum of exact_leakage over every traditional choice of mu links, the
// same links tapped in all m slots.
WorstCaseLeakage worst_case_leakage(const MultiplexLayout& layout, const Matrix& L, const Network& net,
                                    const LocalCoding& coding, std::size_t mu, const Subset& subset,
                                    std::uint64_t cap = 1u << 20);

}  // namespace muxnet
