#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "muxnet/matrix.hpp"
#include "muxnet/rational.hpp"

namespace muxnet {

// Nonempty subset of the secret-message indices {1, ..., T}, stored sorted.
class Subset {
public:
    Subset() = default;
    explicit Subset(std::vector<std::size_t> members);
    Subset(std::initializer_list<std::size_t> members) : Subset(std::vector<std::size_t>(members)) {}

    // Members are the set bits of mask, bit 0 standing for message 1.
    static Subset from_mask(std::uint64_t mask);

    const std::vector<std::size_t>& members() const { return members_; }
    bool contains(std::size_t i) const;
    std::uint64_t mask() const;
    // "1+3" style label used in reports.
    std::string label() const;

    friend bool operator==(const Subset&, const Subset&) = default;

private:
    std::vector<std::size_t> members_;
};

// Block structure of one coding block: m slots of n symbols carry T secret
// messages of k_1..k_T symbols plus k_{T+1} symbols of supplementary randomness,
// with k_1 + ... + k_{T+1} = m n.
class MultiplexLayout {
public:
    // k holds all T+1 block lengths and must sum to m n.
    MultiplexLayout(std::uint32_t q, std::size_t m, std::size_t n, std::vector<std::size_t> k);

    // k_{T+1} = m n - (k_1 + ... + k_T). Throws LayoutError if negative.
    static MultiplexLayout with_padding(std::uint32_t q, std::size_t m, std::size_t n,
                                        std::vector<std::size_t> secret_lengths);

    std::uint32_t q() const { return q_; }
    std::size_t m() const { return m_; }
    std::size_t n() const { return n_; }
    std::size_t secrets() const { return k_.size() - 1; }
    std::size_t block_length() const { return m_ * n_; }
    const std::vector<std::size_t>& k() const { return k_; }
    std::size_t padding() const { return k_.back(); }

    // Offset of block i (1-based, i <= T+1) in the concatenated vector.
    std::size_t offset(std::size_t i) const;
    // k_I = sum of k_i over i in I.
    std::size_t k_sum(const Subset& subset) const;
    // Throws LayoutError if subset is empty or names a message beyond T.
    void check(const Subset& subset) const;

    // All 2^T - 1 nonempty subsets, ordered by bitmask.
    std::vector<Subset> nonempty_subsets() const;

    friend bool operator==(const MultiplexLayout&, const MultiplexLayout&) = default;

private:
    std::uint32_t q_;
    std::size_t m_;
    std::size_t n_;
    std::vector<std::size_t> k_;
};

struct MessageTuple {
    std::vector<Vector> blocks;  // T+1 blocks, block i of length k_i

    friend bool operator==(const MessageTuple&, const MessageTuple&) = default;
};

Vector concat(const MultiplexLayout& layout, const MessageTuple& msgs);
MessageTuple split(const MultiplexLayout& layout, std::span<const Symbol> s);
MessageTuple random_messages(const MultiplexLayout& layout, Rng& rng);

// k_I x mn selector of the coordinates of the blocks in subset.
Matrix projection_matrix(const MultiplexLayout& layout, const Field& field, const Subset& subset);

// X = L^{-1} (S_1, ..., S_{T+1}). Throws SingularMatrix / ShapeError.
Vector encode(const MultiplexLayout& layout, const Matrix& L, const MessageTuple& msgs);
MessageTuple decode(const MultiplexLayout& layout, const Matrix& L, std::span<const Symbol> x);

// Encoder bound to one agreed invertible L; caches L^{-1}.
class MultiplexEncoder {
public:
    MultiplexEncoder(MultiplexLayout layout, Matrix L);

    const MultiplexLayout& layout() const { return layout_; }
    const Matrix& key() const { return key_; }
    const Matrix& key_inverse() const { return key_inv_; }

    Vector encode(const MessageTuple& msgs) const;
    MessageTuple decode(std::span<const Symbol> x) const;

private:
    MultiplexLayout layout_;
    Matrix key_;
    Matrix key_inv_;
};

// max over x1 != x2 of Pr_L[alpha_I(L x1) = alpha_I(L x2)] for L uniform on
// GL(mn, q). A collision depends only on d = x1 - x2, and L d is uniform over
// the nonzero vectors, so the probability is (|ker alpha_I| - 1)/(q^mn - 1) for
// every d. Throws EnumerationTooLarge when |GL(mn, q)| exceeds cap or overflows.
Rational hash_collision_probability(const MultiplexLayout& layout, const Subset& subset,
                                    std::uint64_t cap = UINT64_MAX);

// Same quantity by enumerating every L in GL(mn, q) and every nonzero
// difference d. Cost |GL| (q^mn - 1); cap bounds |GL|.
Rational hash_collision_probability_enumerated(const MultiplexLayout& layout, const Field& field,
                                               const Subset& subset, std::uint64_t cap = 1u << 20);

}  // namespace muxnet
