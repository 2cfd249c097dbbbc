#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "muxnet/codec.hpp"
#include "muxnet/network.hpp"

namespace muxnet {

// Sorted indices into Network::links().
using LinkSet = std::vector<std::size_t>;

enum class EavesdropperKind { Traditional, Statistical, Direct };

// Eve taps mu links per slot.
//
//   Traditional: one link set for the whole block. fixed_set pins it; when
//     absent the set is uniform over all mu-subsets.
//   Statistical: an independent set per slot drawn from set_weights (uniform
//     over all mu-subsets when empty).
//   Direct: a raw mu m x mn matrix drawn from matrix_weights, or uniform over
//     full-rank matrices when empty.
struct EavesdropperModel {
    EavesdropperKind kind = EavesdropperKind::Traditional;
    std::size_t mu = 1;
    std::optional<LinkSet> fixed_set;
    std::vector<std::pair<LinkSet, double>> set_weights;
    std::vector<std::pair<Matrix, double>> matrix_weights;

    // Throws InfeasibleMu for mu > n or mu > link_count (link checks are
    // skipped for the direct kind), and DuplicateLink for malformed sets.
    void validate(std::size_t n, std::size_t link_count) const;
};

// Eve's view of one block: B of shape mu m x mn with the per-slot tapped sets.
struct EavesdropMatrix {
    Matrix B;
    std::vector<LinkSet> slots;  // empty for direct draws
    std::size_t rank = 0;
};

// One realization of the model: per-slot sets, or a raw matrix for Direct.
struct EavesdropperDraw {
    std::vector<LinkSet> slots;
    std::optional<Matrix> matrix;
};

// Block-diagonal B: block t stacks the slot-t global vectors of slots[t].
// Throws WrongSlotCount unless slots.size() == m, DuplicateLink for repeated
// links, and ShapeError when set sizes differ.
EavesdropMatrix eavesdrop_matrix(const Network& net, const LocalCoding& coding, const std::vector<LinkSet>& slots,
                                 const MultiplexLayout& layout);

EavesdropperDraw sample_eavesdropper(const EavesdropperModel& model, const Network* net,
                                     const MultiplexLayout& layout, const Field& field, Rng& rng);

EavesdropMatrix realize(const EavesdropperDraw& draw, const Network* net, const LocalCoding* coding,
                        const MultiplexLayout& layout);

// All mu-subsets of the links in lexicographic order; C_E = binomial(|links|, mu).
// Throws EnumerationTooLarge when C_E exceeds cap.
std::vector<LinkSet> enumerate_eavesdropper_sets(const Network& net, std::size_t mu, std::uint64_t cap = 1u << 20);

std::optional<std::uint64_t> binomial(std::uint64_t n, std::uint64_t k);

}  // namespace muxnet
