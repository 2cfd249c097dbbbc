#include "muxnet/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "muxnet/error.hpp"

namespace muxnet {

namespace {

double subset_count(std::size_t T) { return std::ldexp(1.0, static_cast<int>(T)) - 1.0; }

// m (n - mu) - k_I, possibly negative.
double decay_exponent(const MultiplexLayout& layout, std::size_t k_subset, std::size_t mu) {
    return static_cast<double>(layout.m()) * (static_cast<double>(layout.n()) - static_cast<double>(mu)) -
           static_cast<double>(k_subset);
}

double per_slot_excess(const MultiplexLayout& layout, std::size_t k_subset, std::size_t mu) {
    return -decay_exponent(layout, k_subset, mu) / static_cast<double>(layout.m());
}

}  // namespace

double default_markov_constant(std::size_t T) { return 4.0 * subset_count(T) + 1.0; }

double certification_C2(std::size_t T, std::uint64_t set_count) {
    return 2.0 * subset_count(T) * static_cast<double>(set_count) + 1.0;
}

BoundParams BoundParams::defaults(std::size_t T) {
    const double c = default_markov_constant(T);
    return {1.0, c, c};
}

void BoundParams::validate(std::size_t T) const {
    if (!(rho > 0.0 && rho <= 1.0)) throw DomainError("rho must lie in (0, 1]");
    const double threshold = 2.0 * subset_count(T);
    if (!(C1 > threshold)) throw DomainError("C1 must exceed 2(2^T - 1) = " + std::to_string(threshold));
    if (!(C2 > threshold)) throw DomainError("C2 must exceed 2(2^T - 1) = " + std::to_string(threshold));
}

double decay_term(const MultiplexLayout& layout, std::size_t k_subset, std::size_t mu, double rho) {
    return std::pow(static_cast<double>(layout.q()), -rho * decay_exponent(layout, k_subset, mu));
}

double ub2_bound(const MultiplexLayout& layout, const Subset& subset, std::size_t mu, double rho) {
    return 1.0 + decay_term(layout, layout.k_sum(subset), mu, rho);
}

UbBounds ub_bounds(const MultiplexLayout& layout, const Subset& subset, std::size_t mu, const BoundParams& params) {
    params.validate(layout.secrets());
    const std::size_t k = layout.k_sum(subset);
    const double decay = decay_term(layout, k, mu, params.rho);
    const double markov = 2.0 * subset_count(layout.secrets());
    UbBounds b;
    b.ub2 = 1.0 + decay;
    b.ub5 = params.C1 * decay / params.rho;
    b.ub6 = params.C1 * (1.0 + decay);
    b.ub8 = params.C1 * params.C2 * decay / params.rho;
    if (per_slot_excess(layout, k, mu) >= 0.0) {
        b.ub7 = ub7_bound(layout, subset, mu, params);
        b.ub9 = ub9_bound(layout, subset, mu, params);
    }
    b.prob_l = 1.0 - markov / params.C1;
    b.prob_lb = 1.0 - markov / params.C2;
    return b;
}

double ub7_bound(const MultiplexLayout& layout, const Subset& subset, std::size_t mu, const BoundParams& params) {
    const double excess = per_slot_excess(layout, layout.k_sum(subset), mu);
    if (excess < 0.0) throw DomainError("ub7 needs k_I/m >= n - mu");
    return (1.0 + std::log(params.C1)) / (static_cast<double>(layout.m()) * params.rho) +
           excess * std::log(static_cast<double>(layout.q()));
}

double ub9_bound(const MultiplexLayout& layout, const Subset& subset, std::size_t mu, const BoundParams& params) {
    const double excess = per_slot_excess(layout, layout.k_sum(subset), mu);
    if (excess < 0.0) throw DomainError("ub9 needs k_I/m >= n - mu");
    return (1.0 + std::log(params.C2) + std::log(params.C1)) / (static_cast<double>(layout.m()) * params.rho) +
           excess * std::log(static_cast<double>(layout.q()));
}

double leakage_floor(const MultiplexLayout& layout, const Subset& subset, std::size_t rank_B) {
    const long long excess = static_cast<long long>(layout.k_sum(subset)) -
                             static_cast<long long>(layout.block_length()) + static_cast<long long>(rank_B);
    return static_cast<double>(std::max(0LL, excess)) * std::log(static_cast<double>(layout.q()));
}

bool capacity_membership(const std::vector<double>& rates, double n) {
    double sum = 0.0;
    for (double r : rates) {
        if (!(r >= 0.0)) return false;
        sum += r;
    }
    return sum <= n;
}

double rate_leakage_floor(const std::vector<double>& rates, const Subset& subset, double n, double mu) {
    double sum = 0.0;
    for (auto i : subset.members()) {
        if (i > rates.size()) throw LayoutError("subset exceeds rate tuple");
        sum += rates[i - 1];
    }
    return std::max(0.0, sum - (n - mu));
}

bool GuaranteeResult::meets_guarantee() const { return fraction_good >= prob_l - 3.0 * sigma; }

GuaranteeResult guarantee_experiment(const MultiplexLayout& layout, const Network& net, const LocalCoding& coding,
                                     std::size_t mu, const BoundParams& params, Rng& rng, std::size_t L_trials) {
    if (L_trials == 0) throw DomainError("L_trials must be at least 1");
    params.validate(layout.secrets());
    const Field& f = coding.field();
    const auto subsets = layout.nonempty_subsets();
    const auto sets = enumerate_eavesdropper_sets(net, mu);
    std::vector<Matrix> observations;
    for (const auto& s : sets)
        observations.push_back(eavesdrop_matrix(net, coding, std::vector<LinkSet>(layout.m(), s), layout).B);

    GuaranteeResult out;
    out.trials = L_trials;
    for (const auto& I : subsets) {
        const auto b = ub_bounds(layout, I, mu, params);
        out.per_subset.push_back({I, b.ub5, b.ub6, 0, 0.0, 0.0});
    }
    for (std::size_t t = 0; t < L_trials; ++t) {
        const Matrix L_inv = inverse(sample_gl(layout.block_length(), f, rng));
        bool all_good = true;
        for (auto& g : out.per_subset) {
            double sum = 0.0, sum_exp = 0.0;
            for (const auto& B : observations) {
                const double v = exact_leakage_from_inverse(layout, L_inv, B, g.subset).nats;
                sum += v;
                sum_exp += std::exp(params.rho * v);
            }
            const double mean = sum / static_cast<double>(observations.size());
            const double mean_exp = sum_exp / static_cast<double>(observations.size());
            const bool good = mean <= g.ub5 && mean_exp <= g.ub6;
            g.good += good;
            all_good = all_good && good;
            g.mean_expected_nats += mean / static_cast<double>(L_trials);
            g.max_expected_nats = std::max(g.max_expected_nats, mean);
        }
        out.good += all_good;
    }
    out.fraction_good = static_cast<double>(out.good) / static_cast<double>(L_trials);
    out.prob_l = 1.0 - 2.0 * subset_count(layout.secrets()) / params.C1;
    const double p = std::clamp(out.prob_l, 0.0, 1.0);
    out.sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(L_trials));
    return out;
}

CertificationResult certify_universal_zero(const MultiplexLayout& layout, const Network& net,
                                           const LocalCoding& coding, std::size_t mu, const BoundParams& params,
                                           const Matrix& L, CertificationScope scope) {
    params.validate(layout.secrets());
    const double log_q = std::log(static_cast<double>(layout.q()));
    const Matrix L_inv = inverse(L);
    const auto sets = enumerate_eavesdropper_sets(net, mu);
    std::vector<Matrix> observations;
    for (const auto& s : sets)
        observations.push_back(eavesdrop_matrix(net, coding, std::vector<LinkSet>(layout.m(), s), layout).B);

    CertificationResult out;
    out.certified = true;
    for (const auto& I : layout.nonempty_subsets()) {
        const double ub8 = ub_bounds(layout, I, mu, params).ub8;
        double worst = 0.0;
        std::size_t worst_idx = 0;
        for (std::size_t i = 0; i < observations.size(); ++i) {
            const double v = exact_leakage_from_inverse(layout, L_inv, observations[i], I).nats;
            if (v > worst) {
                worst = v;
                worst_idx = i;
            }
        }
        out.ub8.push_back(ub8);
        out.worst_nats.push_back(worst);
        if (scope == CertificationScope::BoundImplied && ub8 >= log_q) continue;
        out.applicable.push_back(I);
        if (worst > 0.0 && out.certified) {
            out.certified = false;
            out.witness = CertificationWitness{I, sets[worst_idx], worst};
        }
    }
    return out;
}

}  // namespace muxnet
