#include "muxnet/eavesdropper.hpp"

#include <algorithm>
#include <numeric>

#include "muxnet/error.hpp"

namespace muxnet {

namespace {

void check_set(const LinkSet& s, std::size_t link_count) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] >= link_count) throw NetworkError("link index " + std::to_string(s[i]) + " out of range");
        for (std::size_t j = 0; j < i; ++j)
            if (s[i] == s[j]) throw DuplicateLink("link index " + std::to_string(s[i]) + " tapped twice in one slot");
    }
}

std::size_t pick_weighted(const std::vector<double>& weights, Rng& rng) {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    const double u = rng.uniform_real() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) return i;
    }
    return weights.size() - 1;
}

LinkSet uniform_subset(std::size_t links, std::size_t mu, Rng& rng) {
    // Partial Fisher-Yates over link indices.
    std::vector<std::size_t> pool(links);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < mu; ++i) std::swap(pool[i], pool[i + rng.uniform(links - i)]);
    LinkSet s(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(mu));
    std::sort(s.begin(), s.end());
    return s;
}

}  // namespace

std::optional<std::uint64_t> binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > UINT64_MAX) return std::nullopt;
    }
    return static_cast<std::uint64_t>(r);
}

void EavesdropperModel::validate(std::size_t n, std::size_t link_count) const {
    if (mu == 0) throw InfeasibleMu("mu must be positive");
    if (mu > n) throw InfeasibleMu("mu = " + std::to_string(mu) + " exceeds n = " + std::to_string(n));
    if (kind == EavesdropperKind::Direct) return;
    if (mu > link_count)
        throw InfeasibleMu("mu = " + std::to_string(mu) + " exceeds link count " + std::to_string(link_count));
    auto check = [&](const LinkSet& s) {
        if (s.size() != mu) throw InfeasibleMu("tapped set has " + std::to_string(s.size()) + " links, mu = " +
                                               std::to_string(mu));
        check_set(s, link_count);
    };
    if (fixed_set) check(*fixed_set);
    for (const auto& [s, w] : set_weights) {
        check(s);
        if (!(w >= 0.0)) throw InfeasibleMu("negative set weight");
    }
}

EavesdropMatrix eavesdrop_matrix(const Network& net, const LocalCoding& coding, const std::vector<LinkSet>& slots,
                                 const MultiplexLayout& layout) {
    const std::size_t m = layout.m(), n = layout.n();
    if (slots.size() != m)
        throw WrongSlotCount("got " + std::to_string(slots.size()) + " slot sets for m = " + std::to_string(m));
    if (coding.inputs() != n) throw ShapeError("coding inputs differ from layout n");
    const std::size_t mu = slots.empty() ? 0 : slots[0].size();
    for (const auto& s : slots) {
        if (s.size() != mu) throw ShapeError("slot sets differ in size");
        check_set(s, net.links().size());
    }
    Matrix B(coding.field(), mu * m, m * n);
    std::vector<Vector> g;
    for (std::size_t t = 0; t < m; ++t) {
        if (t == 0 || !coding.slot_constant()) g = global_coding_vectors(net, coding, t);
        for (std::size_t r = 0; r < mu; ++r)
            for (std::size_t j = 0; j < n; ++j) B(t * mu + r, t * n + j) = g[slots[t][r]][j];
    }
    const std::size_t rk = rank(B);
    if (rk > mu * m) throw ShapeError("rank(B) exceeds mu m");
    return {std::move(B), slots, rk};
}

EavesdropperDraw sample_eavesdropper(const EavesdropperModel& model, const Network* net,
                                     const MultiplexLayout& layout, const Field& field, Rng& rng) {
    const std::size_t links = net ? net->links().size() : 0;
    if (model.kind != EavesdropperKind::Direct && !net) throw NetworkError("link-based eavesdropper needs a network");
    model.validate(layout.n(), links);
    EavesdropperDraw draw;
    switch (model.kind) {
        case EavesdropperKind::Traditional: {
            const LinkSet s = model.fixed_set ? *model.fixed_set : uniform_subset(links, model.mu, rng);
            draw.slots.assign(layout.m(), s);
            break;
        }
        case EavesdropperKind::Statistical: {
            std::vector<double> w;
            for (const auto& sw : model.set_weights) w.push_back(sw.second);
            for (std::size_t t = 0; t < layout.m(); ++t)
                draw.slots.push_back(model.set_weights.empty() ? uniform_subset(links, model.mu, rng)
                                                               : model.set_weights[pick_weighted(w, rng)].first);
            break;
        }
        case EavesdropperKind::Direct: {
            const std::size_t rows = model.mu * layout.m();
            if (model.matrix_weights.empty()) {
                draw.matrix = sample_full_rank(rows, layout.block_length(), field, rng);
            } else {
                std::vector<double> w;
                for (const auto& mw : model.matrix_weights) w.push_back(mw.second);
                draw.matrix = model.matrix_weights[pick_weighted(w, rng)].first;
                if (draw.matrix->rows() != rows || draw.matrix->cols() != layout.block_length())
                    throw ShapeError("direct matrix must be mu m x mn");
            }
            break;
        }
    }
    return draw;
}

EavesdropMatrix realize(const EavesdropperDraw& draw, const Network* net, const LocalCoding* coding,
                        const MultiplexLayout& layout) {
    if (draw.matrix) {
        const std::size_t rk = rank(*draw.matrix);
        return {*draw.matrix, {}, rk};
    }
    if (!net || !coding) throw NetworkError("link-based draw needs a network and coding");
    return eavesdrop_matrix(*net, *coding, draw.slots, layout);
}

std::vector<LinkSet> enumerate_eavesdropper_sets(const Network& net, std::size_t mu, std::uint64_t cap) {
    const std::size_t links = net.links().size();
    if (mu > links) throw InfeasibleMu("mu exceeds link count");
    const auto count = binomial(links, mu);
    if (!count || *count > cap)
        throw EnumerationTooLarge("C(" + std::to_string(links) + "," + std::to_string(mu) + ") exceeds cap");
    std::vector<LinkSet> out;
    out.reserve(*count);
    LinkSet cur(mu);
    std::iota(cur.begin(), cur.end(), std::size_t{0});
    if (mu == 0) return {LinkSet{}};
    while (true) {
        out.push_back(cur);
        std::size_t i = mu;
        while (i > 0 && cur[i - 1] == links - mu + i - 1) --i;
        if (i == 0) break;
        ++cur[i - 1];
        for (std::size_t j = i; j < mu; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

}  // namespace muxnet
