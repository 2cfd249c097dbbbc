#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include "muxnet/field.hpp"
#include "muxnet/rng.hpp"

namespace muxnet {

using Vector = std::vector<Symbol>;

// Dense row-major matrix over a finite field.
class Matrix {
public:
    Matrix(Field field, std::size_t rows, std::size_t cols);
    Matrix(Field field, std::size_t rows, std::size_t cols, std::vector<Symbol> entries);

    static Matrix identity(Field field, std::size_t n);
    static Matrix from_rows(Field field, std::initializer_list<std::initializer_list<Symbol>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const Field& field() const { return field_; }
    const std::vector<Symbol>& entries() const { return data_; }

    Symbol operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    Symbol& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

    std::span<const Symbol> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    std::span<Symbol> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    Vector column(std::size_t c) const;

    Matrix operator*(const Matrix& rhs) const;
    Vector apply(std::span<const Symbol> x) const;

    Matrix transpose() const;
    // Rows of *this followed by rows of below.
    Matrix stacked(const Matrix& below) const;
    // Rows [first, first + count).
    Matrix row_block(std::size_t first, std::size_t count) const;

    bool is_zero() const;

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.field_ == b.field_ && a.data_ == b.data_;
    }

private:
    Field field_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Symbol> data_;
};

// Reduced row echelon form with leftmost pivots, so the result is canonical.
struct Echelon {
    Matrix reduced;
    std::vector<std::size_t> pivot_cols;  // pivot column of reduced row i
};

Echelon row_reduce(Matrix m);

std::size_t rank(const Matrix& m);

// Basis of {x : m x = 0} as the columns of a cols(m) x (cols(m) - rank) matrix.
// One basis vector per non-pivot column, with a 1 in that column.
Matrix kernel_basis(const Matrix& m);

// Throws ShapeError for non-square input and SingularMatrix when not invertible.
Matrix inverse(const Matrix& m);

// Uniform over all rows x cols matrices of rank rows (rows <= cols). Each row
// is drawn uniformly from the vectors outside the span of the rows above it.
Matrix sample_full_rank(std::size_t rows, std::size_t cols, const Field& field, Rng& rng);

// Uniform over GL(dim, q).
inline Matrix sample_gl(std::size_t dim, const Field& field, Rng& rng) {
    return sample_full_rank(dim, dim, field, rng);
}

// |GL(dim, q)|, or nullopt if it does not fit in 64 bits.
std::optional<std::uint64_t> gl_order(std::size_t dim, std::uint32_t q);

// Every element of GL(dim, q) in lexicographic order of entries. Throws
// EnumerationTooLarge when |GL(dim, q)| exceeds cap.
std::vector<Matrix> enumerate_gl(std::size_t dim, const Field& field, std::uint64_t cap = 1u << 20);

// q^k, or nullopt on 64-bit overflow.
std::optional<std::uint64_t> checked_pow(std::uint64_t q, std::size_t k);

// Base-q digit encoding of vectors, coordinate 0 least significant.
std::uint64_t vector_index(std::span<const Symbol> v, std::uint32_t q);
Vector vector_from_index(std::uint64_t index, std::size_t len, std::uint32_t q);

}  // namespace muxnet
