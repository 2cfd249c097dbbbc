#include <map>

#include "doctest.h"
#include "muxnet/error.hpp"
#include "muxnet/matrix.hpp"
#include "oracles.hpp"

using namespace muxnet;

TEST_CASE("field addition examples") {
    CHECK(ff_add(1, 1, Field::of_size(2)) == 0);
    CHECK(ff_add(3, 4, Field::of_size(5)) == 2);
    // GF(4) mod x^2+x+1: alpha = 2, alpha+1 = 3.
    const Field gf4 = Field::with_modulus(4, {1, 1, 1});
    CHECK(ff_add(2, 3, gf4) == 1);
}

TEST_CASE("field multiplication examples") {
    CHECK(ff_mul(3, 4, Field::of_size(5)) == 2);
    CHECK(ff_mul(1, 0, Field::of_size(2)) == 0);
    const Field gf4 = Field::with_modulus(4, {1, 1, 1});
    CHECK(ff_mul(2, 2, gf4) == 3);
}

TEST_CASE("field inverse examples") {
    CHECK(ff_inv(3, Field::of_size(5)) == 2);
    CHECK(ff_inv(1, Field::of_size(2)) == 1);
    CHECK(oracle::mod_inverse(4, 7) == 2);
    CHECK(ff_inv(4, Field::of_size(7)) == 2);
    CHECK_THROWS_AS(ff_inv(0, Field::of_size(7)), DivisionByZero);
}

TEST_CASE("prime-field inverses agree with extended Euclid") {
    for (std::uint32_t p : {2u, 3u, 13u, 251u, 65521u}) {
        const Field f = Field::of_size(p);
        for (std::uint32_t a = 1; a < std::min(p, 2000u); ++a)
            CHECK(f.inv(a) == static_cast<Symbol>(oracle::mod_inverse(a, p)));
    }
}

TEST_CASE("a * inv(a) = 1 for every field with q <= 256") {
    for (std::uint32_t q = 2; q <= 256; ++q) {
        std::uint32_t p, e;
        if (!prime_power(q, p, e)) continue;
        const Field f = Field::of_size(q);
        for (Symbol a = 1; a < q; ++a) REQUIRE(f.mul(a, f.inv(a)) == 1);
    }
}

TEST_CASE("field axioms hold exhaustively for small q") {
    for (std::uint32_t q : {2u, 3u, 4u, 5u, 8u, 9u}) {
        const Field f = Field::of_size(q);
        CAPTURE(q);
        for (Symbol a = 0; a < q; ++a) {
            CHECK(f.add(a, 0) == a);
            CHECK(f.mul(a, 1) == a);
            CHECK(f.add(a, f.neg(a)) == 0);
            for (Symbol b = 0; b < q; ++b) {
                CHECK(f.add(a, b) == f.add(b, a));
                CHECK(f.mul(a, b) == f.mul(b, a));
                CHECK(f.sub(f.add(a, b), b) == a);
                for (Symbol c = 0; c < q; ++c) {
                    CHECK(f.add(f.add(a, b), c) == f.add(a, f.add(b, c)));
                    CHECK(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
                    CHECK(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }
}

TEST_CASE("irreducibility test agrees with the zero-divisor oracle") {
    for (std::uint32_t p : {2u, 3u}) {
        for (std::uint32_t e = 2; e <= 4; ++e) {
            std::uint32_t tails = 1;
            for (std::uint32_t i = 0; i < e; ++i) tails *= p;
            for (std::uint32_t t = 0; t < tails; ++t) {
                std::vector<std::uint32_t> f(e + 1, 0);
                std::uint32_t v = t;
                for (std::uint32_t i = 0; i < e; ++i) {
                    f[i] = v % p;
                    v /= p;
                }
                f[e] = 1;
                CAPTURE(p);
                CAPTURE(t);
                CHECK(is_irreducible(f, p) == oracle::irreducible_by_zero_divisors(f, p));
            }
        }
    }
}

TEST_CASE("field construction errors and defaults") {
    CHECK_THROWS_AS(Field::of_size(6), InvalidField);
    CHECK_THROWS_AS(Field::of_size(1), InvalidField);
    CHECK_THROWS_AS(Field::of_size(65537), InvalidField);
    CHECK_THROWS_AS(Field::with_modulus(4, {1, 0, 1}), InvalidField);  // (x+1)^2
    CHECK_THROWS_AS(Field::with_modulus(5, {1, 1}), InvalidField);
    CHECK(Field::default_modulus(2, 8) == std::vector<std::uint32_t>{1, 0, 1, 1, 1, 0, 0, 0, 1});
    const auto m9 = Field::default_modulus(3, 2);
    CHECK(is_irreducible(m9, 3));
    const Field big = Field::of_size(65536);
    CHECK(big.mul(12345, big.inv(12345)) == 1);
}

TEST_CASE("rank examples") {
    const Field f = Field::of_size(2);
    CHECK(rank(Matrix::identity(f, 3)) == 3);
    CHECK(rank(Matrix(f, 2, 4)) == 0);
    const Matrix m = Matrix::from_rows(f, {{1, 0}, {1, 0}});
    CHECK(oracle::rank_by_row_space(m) == 1);
    CHECK(rank(m) == 1);
}

TEST_CASE("kernel examples") {
    const Field f = Field::of_size(2);
    CHECK(kernel_basis(Matrix::identity(f, 2)).cols() == 0);
    CHECK(kernel_basis(Matrix(f, 1, 2)).cols() == 2);
    const Matrix k = kernel_basis(Matrix::from_rows(f, {{1, 0}}));
    REQUIRE(k.cols() == 1);
    CHECK(k.column(0) == Vector{0, 1});
}

TEST_CASE("inverse examples") {
    const Field f = Field::of_size(2);
    CHECK(inverse(Matrix::identity(f, 4)) == Matrix::identity(f, 4));
    const Matrix swap = Matrix::from_rows(f, {{0, 1}, {1, 0}});
    CHECK(inverse(swap) == swap);
    const Matrix shear = Matrix::from_rows(f, {{1, 1}, {0, 1}});
    CHECK(inverse(shear) == shear);
    CHECK(shear * shear == Matrix::identity(f, 2));
    CHECK_THROWS_AS(inverse(Matrix::from_rows(f, {{1, 1}, {1, 1}})), SingularMatrix);
    CHECK_THROWS_AS(inverse(Matrix(f, 2, 3)), ShapeError);
}

TEST_CASE("rank-nullity, kernel correctness and rank oracle on random matrices") {
    Rng rng(17);
    for (std::uint32_t q : {2u, 3u, 4u, 5u, 16u}) {
        const Field f = Field::of_size(q);
        for (int trial = 0; trial < 60; ++trial) {
            const std::size_t rows = 1 + rng.uniform(4), cols = 1 + rng.uniform(6);
            Matrix m = oracle::random_matrix(f, rows, cols, rng);
            if (trial % 3 == 0 && rows > 1)  // force dependent rows
                for (std::size_t j = 0; j < cols; ++j) m(rows - 1, j) = f.add(m(0, j), m(rows - 2, j));
            const Matrix k = kernel_basis(m);
            CHECK(rank(m) + k.cols() == cols);
            CHECK(rank(k) == k.cols());
            if (k.cols()) CHECK((m * k).is_zero());
            if (std::pow(q, static_cast<double>(rows)) <= 4096) CHECK(rank(m) == oracle::rank_by_row_space(m));
        }
    }
}

TEST_CASE("inverse round trip on random square matrices") {
    Rng rng(5);
    for (std::uint32_t q : {2u, 3u, 7u, 9u, 256u}) {
        const Field f = Field::of_size(q);
        for (int trial = 0; trial < 40; ++trial) {
            const std::size_t n = 1 + rng.uniform(6);
            const Matrix m = oracle::random_matrix(f, n, n, rng);
            if (rank(m) < n) {
                CHECK_THROWS_AS(inverse(m), SingularMatrix);
                continue;
            }
            const Matrix inv = inverse(m);
            CHECK(m * inv == Matrix::identity(f, n));
            CHECK(inv * m == Matrix::identity(f, n));
        }
    }
}

TEST_CASE("sample_gl examples") {
    Rng rng(2024);
    const Field gf2 = Field::of_size(2);
    for (int i = 0; i < 20; ++i) CHECK(sample_gl(1, gf2, rng) == Matrix::from_rows(gf2, {{1}}));

    // 6000 draws over the 6 elements of GL(2,2); chi-square, 5 dof, alpha = 0.001.
    const auto group = enumerate_gl(2, gf2);
    REQUIRE(group.size() == 6);
    std::map<std::vector<Symbol>, std::size_t> index;
    for (std::size_t i = 0; i < group.size(); ++i) index[group[i].entries()] = i;
    std::vector<std::uint64_t> counts(6, 0);
    for (int i = 0; i < 6000; ++i) ++counts.at(index.at(sample_gl(2, gf2, rng).entries()));
    CHECK(oracle::chi_square_uniform(counts) < 20.515);

    const Field gf3 = Field::of_size(3);
    for (int i = 0; i < 500; ++i) {
        const Matrix m = sample_gl(2, gf3, rng);
        CHECK(gf3.sub(gf3.mul(m(0, 0), m(1, 1)), gf3.mul(m(0, 1), m(1, 0))) != 0);
    }
}

TEST_CASE("sample_gl output is always invertible") {
    Rng rng(99);
    for (std::uint32_t q : {2u, 3u, 4u, 16u, 65521u}) {
        const Field f = Field::of_size(q);
        for (int i = 0; i < 30; ++i) {
            const std::size_t d = 1 + rng.uniform(8);
            const Matrix m = sample_gl(d, f, rng);
            CHECK_NOTHROW((void)inverse(m));
        }
    }
}

TEST_CASE("full-rank sampling is uniform over 2x3 matrices of rank 2 over GF(2)") {
    Rng rng(7);
    const Field f = Field::of_size(2);
    std::map<std::vector<Symbol>, std::uint64_t> counts;
    for (int i = 0; i < 42000; ++i) {
        const Matrix m = sample_full_rank(2, 3, f, rng);
        REQUIRE(rank(m) == 2);
        ++counts[m.entries()];
    }
    REQUIRE(counts.size() == 42);  // (8-1)(8-2)
    std::vector<std::uint64_t> c;
    for (auto& [k, v] : counts) c.push_back(v);
    CHECK(oracle::chi_square_uniform(c) < 74.74);  // 41 dof, alpha = 0.001
}

TEST_CASE("GL enumeration matches the group order") {
    for (auto [d, q] : std::vector<std::pair<std::size_t, std::uint32_t>>{{1, 5}, {2, 2}, {2, 3}, {3, 2}, {2, 4}}) {
        const Field f = Field::of_size(q);
        const auto g = enumerate_gl(d, f);
        CHECK(g.size() == *gl_order(d, q));
        std::set<std::vector<Symbol>> distinct;
        for (const auto& m : g) {
            CHECK(rank(m) == d);
            distinct.insert(m.entries());
        }
        CHECK(distinct.size() == g.size());
    }
    CHECK_THROWS_AS(enumerate_gl(4, Field::of_size(3), 1000), EnumerationTooLarge);
}

TEST_CASE("row reduction uses leftmost pivots deterministically") {
    const Field f = Field::of_size(3);
    const Matrix m = Matrix::from_rows(f, {{0, 2, 1}, {1, 1, 0}, {1, 0, 1}});
    const Echelon a = row_reduce(m), b = row_reduce(m);
    CHECK(a.reduced == b.reduced);
    CHECK(a.pivot_cols == std::vector<std::size_t>{0, 1});
}
