#include <algorithm>
#include <cmath>
#include <functional>

#include "doctest.h"
#include "muxnet/bounds.hpp"
#include "muxnet/error.hpp"

using namespace muxnet;

namespace {

// Source s with two links to t: e1 carries x1, e2 carries nothing.
struct TapFirstLink {
    Network net{{"s", "t"}, "s", {"t"}, {{"e1", "s", "t"}, {"e2", "s", "t"}}};
    LocalCoding coding;
    explicit TapFirstLink(const Field& f) : coding(constant_coding(net, f, 2, 0)) { coding.set(0, 0, 0, 1); }
};

std::size_t grid_argmin(const std::function<double(double)>& fn) {
    std::size_t best = 1;
    double best_v = fn(0.01);
    for (std::size_t i = 2; i <= 100; ++i) {
        const double v = fn(i / 100.0);
        if (v <= best_v) {
            best_v = v;
            best = i;
        }
    }
    return best;
}

}  // namespace

TEST_CASE("bound parameter defaults and validation") {
    CHECK(default_markov_constant(1) == 5.0);
    CHECK(default_markov_constant(2) == 13.0);
    CHECK(certification_C2(1, 9) == 19.0);
    const auto p = BoundParams::defaults(2);
    CHECK(p.rho == 1.0);
    CHECK(p.C1 == 13.0);
    CHECK_NOTHROW(p.validate(2));
    CHECK_THROWS_AS((BoundParams{1.0, 6.0, 13.0}.validate(2)), DomainError);
    CHECK_THROWS_AS((BoundParams{0.0, 13.0, 13.0}.validate(2)), DomainError);
    CHECK_THROWS_AS((BoundParams{1.1, 13.0, 13.0}.validate(2)), DomainError);
}

TEST_CASE("ub2 examples") {
    const MultiplexLayout a(2, 2, 2, {1, 3});
    CHECK(ub2_bound(a, {1}, 1, 1.0) == doctest::Approx(1.5).epsilon(1e-15));
    const MultiplexLayout b(2, 2, 2, {2, 2});
    CHECK(ub2_bound(b, {1}, 1, 1.0) == 2.0);
    // k_I/m = 1 below n - mu = 2.
    double prev = INFINITY;
    for (std::size_t m = 1; m <= 6; ++m) {
        const MultiplexLayout l(3, m, 3, {m, 2 * m});
        const double v = ub2_bound(l, {1}, 1, 0.7);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("ub bounds examples") {
    const MultiplexLayout layout(2, 4, 2, {6, 2});
    const BoundParams p{1.0, 7.0, 7.0};
    const auto b = ub_bounds(layout, {1}, 1, p);
    REQUIRE(b.ub7);
    CHECK(*b.ub7 == doctest::Approx((1.0 + std::log(7.0)) / 4.0 + 0.5 * std::log(2.0)).epsilon(1e-14));
    CHECK(*b.ub7 == doctest::Approx(1.083).epsilon(1e-3));
    CHECK(*b.ub9 == doctest::Approx((1.0 + 2.0 * std::log(7.0)) / 4.0 + 0.5 * std::log(2.0)).epsilon(1e-14));
    CHECK(b.prob_l == doctest::Approx(5.0 / 7.0).epsilon(1e-15));
    CHECK(b.prob_lb == doctest::Approx(5.0 / 7.0).epsilon(1e-15));
    const double decay = std::pow(2.0, -(4.0 - 6.0));
    CHECK(b.ub5 == doctest::Approx(7.0 * decay));
    CHECK(b.ub6 == doctest::Approx(7.0 * (1.0 + decay)));
    CHECK(b.ub8 == doctest::Approx(49.0 * decay));

    const MultiplexLayout below(2, 4, 2, {3, 5});
    const auto small = ub_bounds(below, {1}, 1, p);
    CHECK_FALSE(small.ub7);
    CHECK_FALSE(small.ub9);
    CHECK_THROWS_AS(ub7_bound(below, {1}, 1, p), DomainError);
    CHECK_THROWS_AS(ub9_bound(below, {1}, 1, p), DomainError);
}

TEST_CASE("ub5 and ub7 are minimized at rho = 1 inside their regimes") {
    Rng rng(83);
    for (int trial = 0; trial < 50; ++trial) {
        const std::uint32_t q = std::vector<std::uint32_t>{2, 3, 4, 16, 256}[rng.uniform(5)];
        const std::size_t m = 1 + rng.uniform(6), n = 2 + rng.uniform(3), mu = 1 + rng.uniform(n - 1);
        const std::size_t T = 1 + rng.uniform(3);
        std::vector<std::size_t> k(T + 1, 0);
        // ub5 regime: k_I for the first subset at most m(n - mu).
        k[0] = rng.uniform(m * (n - mu) + 1);
        k[T] = m * n - k[0];
        const MultiplexLayout layout(q, m, n, k);
        const double C1 = default_markov_constant(T) + rng.uniform(20);
        CHECK(grid_argmin([&](double rho) { return ub_bounds(layout, {1}, mu, {rho, C1, C1}).ub5; }) == 100);

        // ub7 regime: k_I at least m(n - mu).
        std::vector<std::size_t> k7(T + 1, 0);
        k7[0] = m * (n - mu) + rng.uniform(m * mu + 1);
        k7[T] = m * n - k7[0];
        const MultiplexLayout l7(q, m, n, k7);
        CHECK(grid_argmin([&](double rho) { return ub7_bound(l7, {1}, mu, {rho, C1, C1}); }) == 100);
    }
}

TEST_CASE("ub5 argmin leaves rho = 1 when k_I/m exceeds n - mu by more than 1/(m ln q)") {
    // 1/rho + (m(n - mu) - k_I) ln q < 0 at rho = 1 makes ub5 increasing there.
    const MultiplexLayout layout(16, 2, 2, {4, 0});
    const auto at = [&](double rho) { return ub_bounds(layout, {1}, 1, {rho, 5.0, 5.0}).ub5; };
    CHECK(grid_argmin(at) < 100);
    CHECK(at(1.0) > at(0.5));
}

TEST_CASE("leakage floor and capacity examples") {
    const MultiplexLayout layout(2, 4, 2, {6, 2});
    CHECK(leakage_floor(layout, {1}, 4) == doctest::Approx(2 * std::log(2.0)));
    CHECK(leakage_floor(MultiplexLayout(2, 4, 2, {4, 4}), {1}, 4) == 0.0);
    CHECK(leakage_floor(layout, {1}, 8) == doctest::Approx(6 * std::log(2.0)));

    CHECK(capacity_membership({1.5, 0.5}, 2));
    CHECK_FALSE(capacity_membership({2.5, 0.0}, 2));
    CHECK(capacity_membership({0.0, 0.0}, 2));
    CHECK_FALSE(capacity_membership({-0.1, 1.0}, 2));
    CHECK(rate_leakage_floor({1, 1}, {1, 2}, 2, 1) == 1.0);
    CHECK(rate_leakage_floor({0.5, 0.4}, {1, 2}, 2, 1) == 0.0);
    CHECK(rate_leakage_floor({0.5, 0.4}, {1}, 2, 1) == 0.0);
    CHECK_THROWS_AS(rate_leakage_floor({1.0}, {2}, 2, 1), LayoutError);
}

TEST_CASE("guarantee experiment examples") {
    const Field f = Field::of_size(2);
    const Network net = butterfly_network();
    Rng rng(89);
    const MultiplexLayout layout(2, 2, 2, {1, 3});

    const auto loose = guarantee_experiment(layout, net, butterfly_coding(net, f), 1, {1.0, 1e12, 1e12}, rng, 30);
    CHECK(loose.fraction_good == 1.0);

    const auto silent = guarantee_experiment(layout, net, constant_coding(net, f, 2, 0), 1, {1.0, 7.0, 7.0}, rng, 30);
    CHECK(silent.fraction_good == 1.0);
    for (const auto& s : silent.per_subset) CHECK(s.max_expected_nats == 0.0);

    const auto seven = guarantee_experiment(layout, net, butterfly_coding(net, f), 1, {1.0, 7.0, 7.0}, rng, 200);
    CHECK(seven.prob_l == doctest::Approx(5.0 / 7.0));
    CHECK(seven.sigma == doctest::Approx(std::sqrt(5.0 / 7.0 * 2.0 / 7.0 / 200.0)));
    CHECK(seven.meets_guarantee());
    CHECK(seven.per_subset.size() == 1);

    CHECK_THROWS_AS(guarantee_experiment(layout, net, butterfly_coding(net, f), 1, {1.0, 7.0, 7.0}, rng, 0),
                    DomainError);
}

TEST_CASE("certification examples") {
    const Field f = Field::of_size(2);
    const TapFirstLink inst(f);
    const MultiplexLayout layout(2, 1, 2, {1, 1});
    const BoundParams p = BoundParams::defaults(1);
    const Matrix swap = Matrix::from_rows(f, {{0, 1}, {1, 0}});
    const Matrix id = Matrix::identity(f, 2);
    const auto all = CertificationScope::AllSubsets;

    const auto good = certify_universal_zero(layout, inst.net, inst.coding, 1, p, swap, all);
    CHECK(good.certified);
    CHECK_FALSE(good.witness);
    CHECK(good.worst_nats == std::vector<double>{0.0});

    const auto bad = certify_universal_zero(layout, inst.net, inst.coding, 1, p, id, all);
    CHECK_FALSE(bad.certified);
    REQUIRE(bad.witness);
    CHECK(bad.witness->subset == Subset{1});
    CHECK(bad.witness->set == LinkSet{0});
    CHECK(bad.witness->nats == doctest::Approx(std::log(2.0)));

    // Here ub8 = C1 C2 exceeds ln 2, so no subset is bound-implied and the
    // default scope certifies vacuously.
    const auto implied = certify_universal_zero(layout, inst.net, inst.coding, 1, p, id);
    CHECK(implied.applicable.empty());
    CHECK(implied.certified);
    CHECK(implied.ub8[0] == doctest::Approx(25.0));
}

TEST_CASE("certification applicability is monotone in C1 C2") {
    const Field f = Field::of_size(16);
    const Network net = butterfly_network();
    Rng rng(97);
    const LocalCoding coding = random_coding(net, f, 2, 5, rng);
    const MultiplexLayout layout(16, 5, 2, {1, 1, 8});
    const Matrix L = sample_gl(10, f, rng);
    std::vector<Subset> prev;
    bool prev_certified = false;
    for (double c : {1e6, 1e3, 100.0, 13.0 + 1e-9}) {
        const auto r = certify_universal_zero(layout, net, coding, 1, {1.0, c, c}, L);
        for (const auto& I : prev) CHECK(std::find(r.applicable.begin(), r.applicable.end(), I) != r.applicable.end());
        bool zero = true;
        for (std::size_t i = 0; i < r.applicable.size(); ++i) {
            const auto subsets = layout.nonempty_subsets();
            const auto pos = std::find(subsets.begin(), subsets.end(), r.applicable[i]) - subsets.begin();
            zero = zero && r.worst_nats[pos] == 0.0;
        }
        CHECK(r.certified == zero);
        if (prev_certified && zero) CHECK(r.certified);
        prev = r.applicable;
        prev_certified = r.certified;
    }
}
