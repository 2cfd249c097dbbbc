#include "muxnet/leakage.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "muxnet/error.hpp"

namespace muxnet {

double LeakageResult::bits() const { return nats / std::numbers::ln2; }

LeakageResult exact_leakage_from_inverse(const MultiplexLayout& layout, const Matrix& L_inverse, const Matrix& B,
                                         const Subset& subset) {
    const std::size_t mn = layout.block_length();
    if (B.cols() != mn) throw ShapeError("B must have mn = " + std::to_string(mn) + " columns");
    if (L_inverse.rows() != mn || L_inverse.cols() != mn) throw ShapeError("L must be mn x mn");
    const Field& f = L_inverse.field();
    LeakageResult r;
    r.subset = subset;
    r.k_subset = layout.k_sum(subset);
    r.rank_B = rank(B);
    const Matrix K = kernel_basis(B * L_inverse);
    r.kernel_dim = K.cols() == 0 ? 0 : rank(projection_matrix(layout, f, subset) * K);
    r.conditional_entropy_nats = static_cast<double>(r.kernel_dim) * f.log_q();
    r.nats = static_cast<double>(r.k_subset - r.kernel_dim) * f.log_q();
    return r;
}

LeakageResult exact_leakage(const MultiplexLayout& layout, const Matrix& L, const Matrix& B, const Subset& subset) {
    if (L.rows() != L.cols()) throw ShapeError("L must be square");
    return exact_leakage_from_inverse(layout, inverse(L), B, subset);
}

double brute_force_leakage(const MultiplexLayout& layout, const Matrix& L, const Matrix& B, const Subset& subset,
                           std::uint64_t cap) {
    const std::size_t mn = layout.block_length();
    const auto total = checked_pow(layout.q(), mn);
    if (!total || *total > cap) throw EnumerationTooLarge("q^mn exceeds brute-force cap " + std::to_string(cap));
    if (B.cols() != mn || L.rows() != mn || L.cols() != mn) throw ShapeError("B or L has the wrong shape");
    const std::uint32_t q = layout.q();

    std::vector<std::pair<std::size_t, std::size_t>> ranges;  // [offset, offset + k_i)
    for (auto i : subset.members()) ranges.emplace_back(layout.offset(i), layout.offset(i) + layout.k()[i - 1]);

    std::map<std::pair<std::uint64_t, Vector>, std::uint64_t> joint;
    std::map<std::uint64_t, std::uint64_t> marginal_a;
    std::map<Vector, std::uint64_t> marginal_z;
    for (std::uint64_t idx = 0; idx < *total; ++idx) {
        const Vector x = vector_from_index(idx, mn, q);
        const Vector s = L.apply(x);
        std::uint64_t a = 0;
        for (auto [lo, hi] : ranges)
            for (std::size_t j = lo; j < hi; ++j) a = a * q + s[j];
        Vector z = B.apply(x);
        ++marginal_a[a];
        ++marginal_z[z];
        ++joint[{a, std::move(z)}];
    }
    const double N = static_cast<double>(*total);
    double mi = 0.0;
    for (const auto& [key, c] : joint) {
        const double ca = static_cast<double>(marginal_a[key.first]);
        const double cz = static_cast<double>(marginal_z[key.second]);
        mi += static_cast<double>(c) / N * std::log(static_cast<double>(c) * N / (ca * cz));
    }
    return std::max(mi, 0.0);
}

namespace {

struct WeightedB {
    Matrix B;
    double weight;
};

}  // namespace

AverageLeakage average_leakage(const MultiplexLayout& layout, const Matrix& L, const EavesdropperModel& model,
                               const Network* net, const LocalCoding* coding, const Subset& subset, Rng& rng,
                               std::size_t trials, double rho, std::uint64_t exhaustive_cap) {
    if (trials == 0) throw DomainError("trials must be at least 1");
    const Matrix L_inv = inverse(L);
    const Field& f = L.field();
    model.validate(layout.n(), net ? net->links().size() : 0);

    // Support of the model when it is small enough to enumerate.
    std::vector<WeightedB> support;
    bool exhaustive = false;
    if (model.kind == EavesdropperKind::Traditional && net && coding) {
        if (model.fixed_set) {
            support.push_back({eavesdrop_matrix(*net, *coding, std::vector<LinkSet>(layout.m(), *model.fixed_set),
                                                layout).B, 1.0});
            exhaustive = true;
        } else {
            const auto count = binomial(net->links().size(), model.mu);
            if (count && *count <= exhaustive_cap) {
                for (const auto& s : enumerate_eavesdropper_sets(*net, model.mu, exhaustive_cap))
                    support.push_back(
                        {eavesdrop_matrix(*net, *coding, std::vector<LinkSet>(layout.m(), s), layout).B, 1.0});
                exhaustive = true;
            }
        }
    } else if (model.kind == EavesdropperKind::Statistical && net && coding) {
        std::vector<std::pair<LinkSet, double>> per_slot = model.set_weights;
        if (per_slot.empty()) {
            const auto count = binomial(net->links().size(), model.mu);
            if (count && *count <= exhaustive_cap)
                for (auto& s : enumerate_eavesdropper_sets(*net, model.mu, exhaustive_cap))
                    per_slot.emplace_back(std::move(s), 1.0);
        }
        const auto combos = per_slot.empty() ? std::nullopt : checked_pow(per_slot.size(), layout.m());
        if (combos && *combos <= exhaustive_cap) {
            double total_w = 0.0;
            for (const auto& p : per_slot) total_w += p.second;
            for (std::uint64_t c = 0; c < *combos; ++c) {
                std::uint64_t rest = c;
                std::vector<LinkSet> slots;
                double w = 1.0;
                for (std::size_t t = 0; t < layout.m(); ++t) {
                    const auto& p = per_slot[rest % per_slot.size()];
                    rest /= per_slot.size();
                    slots.push_back(p.first);
                    w *= p.second / total_w;
                }
                if (w > 0.0) support.push_back({eavesdrop_matrix(*net, *coding, slots, layout).B, w});
            }
            exhaustive = true;
        }
    } else if (model.kind == EavesdropperKind::Direct && !model.matrix_weights.empty()) {
        for (const auto& [B, w] : model.matrix_weights) support.push_back({B, w});
        exhaustive = true;
    }

    AverageLeakage out;
    out.exhaustive = exhaustive;
    if (exhaustive) {
        double total_w = 0.0, sum = 0.0, sum_exp = 0.0;
        for (const auto& [B, w] : support) {
            const double v = exact_leakage_from_inverse(layout, L_inv, B, subset).nats;
            total_w += w;
            sum += w * v;
            sum_exp += w * std::exp(rho * v);
        }
        out.mean_nats = sum / total_w;
        out.mean_exp_rho = sum_exp / total_w;
        out.samples = support.size();
        return out;
    }
    double sum = 0.0, sum_exp = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto draw = sample_eavesdropper(model, net, layout, f, rng);
        const auto em = realize(draw, net, coding, layout);
        const double v = exact_leakage_from_inverse(layout, L_inv, em.B, subset).nats;
        sum += v;
        sum_exp += std::exp(rho * v);
    }
    out.mean_nats = sum / static_cast<double>(trials);
    out.mean_exp_rho = sum_exp / static_cast<double>(trials);
    out.samples = trials;
    return out;
}

WorstCaseLeakage worst_case_leakage(const MultiplexLayout& layout, const Matrix& L, const Network& net,
                                    const LocalCoding& coding, std::size_t mu, const Subset& subset,
                                    std::uint64_t cap) {
    const Matrix L_inv = inverse(L);
    WorstCaseLeakage out;
    out.sets = enumerate_eavesdropper_sets(net, mu, cap);
    for (const auto& s : out.sets) {
        const auto em = eavesdrop_matrix(net, coding, std::vector<LinkSet>(layout.m(), s), layout);
        out.per_set.push_back(exact_leakage_from_inverse(layout, L_inv, em.B, subset));
        if (out.argmax.empty() || out.per_set.back().nats > out.max_nats) {
            out.max_nats = out.per_set.back().nats;
            out.argmax = s;
        }
    }
    return out;
}

}  // namespace muxnet
