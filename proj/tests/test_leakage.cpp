#include <cmath>

#include "doctest.h"
#include "muxnet/error.hpp"
#include "muxnet/leakage.hpp"
#include "oracles.hpp"

using namespace muxnet;

namespace {

const Field F2 = Field::of_size(2);
const Matrix kSwap = Matrix::from_rows(F2, {{0, 1}, {1, 0}});

// Multiples of ln q are recovered exactly from the kernel dimension, so the
// quotient must round-trip to an integer.
bool is_multiple_of_log_q(double nats, double log_q) {
    const double r = nats / log_q;
    return std::abs(r - std::round(r)) < 1e-12;
}

}  // namespace

TEST_CASE("exact leakage examples") {
    const MultiplexLayout layout(2, 1, 2, {1, 1});
    const Matrix I2 = Matrix::identity(F2, 2);
    const Matrix tap = Matrix::from_rows(F2, {{1, 0}});

    const auto id = exact_leakage(layout, I2, tap, {1});
    CHECK(id.nats == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(id.kernel_dim == 0);
    CHECK(id.rank_B == 1);

    const auto sw = exact_leakage(layout, kSwap, tap, {1});
    CHECK(sw.nats == 0.0);
    CHECK(sw.kernel_dim == 1);
    CHECK(sw.conditional_entropy_nats == doctest::Approx(std::log(2.0)));

    CHECK(exact_leakage(layout, kSwap, Matrix(F2, 1, 2), {1}).nats == 0.0);
    CHECK(exact_leakage(layout, kSwap, I2, {1}).nats == doctest::Approx(std::log(2.0)));
    CHECK(exact_leakage(layout, kSwap, I2, {1}).leaked_symbols() == 1);
    CHECK(id.bits() == doctest::Approx(1.0));

    CHECK_THROWS_AS(exact_leakage(layout, I2, Matrix(F2, 1, 3), {1}), ShapeError);
    CHECK_THROWS_AS(exact_leakage(layout, Matrix::from_rows(F2, {{1, 1}, {1, 1}}), tap, {1}), SingularMatrix);
}

TEST_CASE("brute force examples") {
    const MultiplexLayout layout(2, 1, 2, {1, 1});
    const Matrix tap = Matrix::from_rows(F2, {{1, 0}});
    for (const Matrix& L : enumerate_gl(2, F2)) {
        const double bf = brute_force_leakage(layout, L, tap, {1});
        CHECK(std::abs(bf - exact_leakage(layout, L, tap, {1}).nats) < 1e-9);
    }
    // Eve reads only S_2's coordinate when L is the identity.
    CHECK(brute_force_leakage(layout, Matrix::identity(F2, 2), Matrix::from_rows(F2, {{0, 1}}), {1}) == 0.0);
    CHECK(brute_force_leakage(layout, kSwap, Matrix::identity(F2, 2), {1}) == doctest::Approx(std::log(2.0)));
    CHECK_THROWS_AS(brute_force_leakage(MultiplexLayout(2, 1, 20, {10, 10}), Matrix::identity(F2, 20),
                                        Matrix(F2, 1, 20), {1}),
                    EnumerationTooLarge);
}

TEST_CASE("exact leakage agrees with brute force on small instances") {
    Rng rng(41);
    struct Case {
        std::uint32_t q;
        std::size_t m, n;
        std::vector<std::size_t> k;
    };
    const std::vector<Case> cases{{2, 1, 3, {1, 1, 1}}, {2, 2, 2, {1, 2, 1}}, {3, 1, 3, {2, 1}},
                                  {3, 2, 2, {1, 1, 1, 1}}, {4, 1, 3, {1, 2}},   {5, 1, 2, {1, 1}},
                                  {2, 3, 2, {2, 2, 2}}};
    for (const auto& c : cases) {
        const Field f = Field::of_size(c.q);
        const MultiplexLayout layout(c.q, c.m, c.n, c.k);
        const std::size_t mn = layout.block_length();
        for (int trial = 0; trial < 6; ++trial) {
            const Matrix L = sample_gl(mn, f, rng);
            for (std::size_t rows = 0; rows <= mn; ++rows) {
                const Matrix B = oracle::random_matrix(f, rows, mn, rng);
                for (const auto& I : layout.nonempty_subsets()) {
                    const auto ex = exact_leakage(layout, L, B, I);
                    CAPTURE(c.q);
                    CAPTURE(rows);
                    CHECK(std::abs(ex.nats - brute_force_leakage(layout, L, B, I)) < 1e-9);
                    CHECK(is_multiple_of_log_q(ex.nats, f.log_q()));
                    CHECK(ex.kernel_dim <= std::min(ex.k_subset, mn - ex.rank_B));
                    CHECK(ex.nats >= 0.0);
                }
            }
        }
    }
}

TEST_CASE("leakage floor holds for full-rank observations") {
    Rng rng(43);
    for (std::uint32_t q : {2u, 3u, 7u}) {
        const Field f = Field::of_size(q);
        for (std::size_t m = 1; m <= 3; ++m) {
            const std::size_t n = 2, mu = 1;
            const MultiplexLayout layout(q, m, n, {m + 1, m - 1});
            for (int trial = 0; trial < 20; ++trial) {
                const Matrix L = sample_gl(m * n, f, rng);
                const Matrix B = sample_full_rank(mu * m, m * n, f, rng);
                for (const auto& I : layout.nonempty_subsets()) {
                    const std::size_t kI = layout.k_sum(I);
                    const double floor = std::max<double>(0.0, double(kI) - double(m * (n - mu))) * f.log_q();
                    CHECK(exact_leakage(layout, L, B, I).nats >= floor - 1e-12);
                }
            }
        }
    }
}

TEST_CASE("adding observation rows never lowers leakage") {
    Rng rng(47);
    const Field f = Field::of_size(3);
    const MultiplexLayout layout(3, 2, 2, {1, 2, 1});
    for (int trial = 0; trial < 40; ++trial) {
        const Matrix L = sample_gl(4, f, rng);
        Matrix B = oracle::random_matrix(f, 1, 4, rng);
        for (int extra = 0; extra < 4; ++extra) {
            const Matrix bigger = B.stacked(oracle::random_matrix(f, 1, 4, rng));
            for (const auto& I : layout.nonempty_subsets())
                CHECK(exact_leakage(layout, L, bigger, I).nats >= exact_leakage(layout, L, B, I).nats);
            B = bigger;
        }
    }
}

TEST_CASE("post-processing Eve's view never raises leakage") {
    Rng rng(53);
    const Field f = Field::of_size(4);
    const MultiplexLayout layout(4, 1, 3, {1, 1, 1});
    for (int trial = 0; trial < 40; ++trial) {
        const Matrix L = sample_gl(3, f, rng);
        const Matrix B = oracle::random_matrix(f, 2, 3, rng);
        const Matrix A = oracle::random_matrix(f, 1 + rng.uniform(3), 2, rng);
        for (const auto& I : layout.nonempty_subsets())
            CHECK(exact_leakage(layout, L, A * B, I).nats <= exact_leakage(layout, L, B, I).nats);
    }
}

TEST_CASE("average leakage examples") {
    const Network net = butterfly_network();
    const LocalCoding coding = butterfly_coding(net, F2);
    const MultiplexLayout layout(2, 1, 2, {1, 1});
    Rng rng(59);
    const Matrix L = kSwap;

    EavesdropperModel fixed;
    fixed.fixed_set = LinkSet{net.link_index("e7")};
    const auto one = average_leakage(layout, L, fixed, &net, &coding, {1}, rng, 10);
    const auto em = eavesdrop_matrix(net, coding, {*fixed.fixed_set}, layout);
    CHECK(one.exhaustive);
    CHECK(one.mean_nats == exact_leakage(layout, L, em.B, {1}).nats);

    EavesdropperModel zero;
    zero.kind = EavesdropperKind::Direct;
    zero.matrix_weights = {{Matrix(F2, 1, 2), 1.0}};
    CHECK(average_leakage(layout, L, zero, nullptr, nullptr, {1}, rng, 10).mean_nats == 0.0);

    EavesdropperModel uniform;
    const auto avg = average_leakage(layout, L, uniform, &net, &coding, {1}, rng, 10, 0.5);
    double sum = 0.0, sum_exp = 0.0;
    for (const auto& s : enumerate_eavesdropper_sets(net, 1)) {
        const double v = exact_leakage(layout, L, eavesdrop_matrix(net, coding, {s}, layout).B, {1}).nats;
        sum += v;
        sum_exp += std::exp(0.5 * v);
    }
    CHECK(avg.samples == 9);
    CHECK(avg.mean_nats == doctest::Approx(sum / 9).epsilon(1e-14));
    CHECK(avg.mean_exp_rho == doctest::Approx(sum_exp / 9).epsilon(1e-14));

    CHECK_THROWS_AS(average_leakage(layout, L, uniform, &net, &coding, {1}, rng, 0), DomainError);
}

TEST_CASE("statistical average: exhaustive product law vs Monte Carlo") {
    const Field f = Field::of_size(2);
    const Network net = butterfly_network();
    const LocalCoding coding = butterfly_coding(net, f);
    const MultiplexLayout layout(2, 2, 2, {1, 2, 1});
    Rng rng(61);
    const Matrix L = sample_gl(4, f, rng);
    EavesdropperModel stat;
    stat.kind = EavesdropperKind::Statistical;
    const auto exact = average_leakage(layout, L, stat, &net, &coding, {1, 2}, rng, 1);
    CHECK(exact.exhaustive);
    CHECK(exact.samples == 81);
    const auto mc = average_leakage(layout, L, stat, &net, &coding, {1, 2}, rng, 20000, 1.0, 1);
    CHECK_FALSE(mc.exhaustive);
    // Leakage is at most 3 ln 2, so the Monte Carlo sd is below 0.015 nats.
    CHECK(std::abs(mc.mean_nats - exact.mean_nats) < 0.06);
}

TEST_CASE("worst case leakage examples") {
    const Network net = butterfly_network();
    const LocalCoding coding = butterfly_coding(net, F2);
    const MultiplexLayout layout(2, 1, 2, {1, 1});
    Rng rng(67);

    // mu = n with a decodable pair of links sees everything.
    const auto full = worst_case_leakage(layout, kSwap, net, coding, 2, {1});
    CHECK(full.max_nats == doctest::Approx(std::log(2.0)));
    CHECK(full.sets.size() == 36);

    const auto zero = worst_case_leakage(layout, kSwap, net, constant_coding(net, F2, 2, 0), 1, {1});
    CHECK(zero.max_nats == 0.0);

    for (const Matrix& L : enumerate_gl(2, F2)) {
        const auto wc = worst_case_leakage(layout, L, net, coding, 1, {1});
        REQUIRE(wc.sets.size() == 9);
        double mx = 0.0;
        for (std::size_t i = 0; i < wc.sets.size(); ++i) {
            const Matrix B = eavesdrop_matrix(net, coding, {wc.sets[i]}, layout).B;
            const double bf = brute_force_leakage(layout, L, B, {1});
            CHECK(std::abs(bf - wc.per_set[i].nats) < 1e-9);
            mx = std::max(mx, bf);
        }
        CHECK(std::abs(mx - wc.max_nats) < 1e-9);
    }
}
