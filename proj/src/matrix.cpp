#include "muxnet/matrix.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "muxnet/error.hpp"

namespace muxnet {

Matrix::Matrix(Field field, std::size_t rows, std::size_t cols)
    : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

Matrix::Matrix(Field field, std::size_t rows, std::size_t cols, std::vector<Symbol> entries)
    : field_(std::move(field)), rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows * cols)
        throw ShapeError("expected " + std::to_string(rows * cols) + " entries, got " +
                         std::to_string(data_.size()));
    for (Symbol s : data_)
        if (!field_.valid(s)) throw ShapeError("entry " + std::to_string(s) + " outside " + field_.describe());
}

Matrix Matrix::identity(Field field, std::size_t n) {
    Matrix m(std::move(field), n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

Matrix Matrix::from_rows(Field field, std::initializer_list<std::initializer_list<Symbol>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r ? rows.begin()->size() : 0;
    std::vector<Symbol> data;
    data.reserve(r * c);
    for (const auto& row : rows) {
        if (row.size() != c) throw ShapeError("ragged row list");
        data.insert(data.end(), row.begin(), row.end());
    }
    return Matrix(std::move(field), r, c, std::move(data));
}

Vector Matrix::column(std::size_t c) const {
    Vector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
    if (cols_ != rhs.rows_)
        throw ShapeError("product of " + std::to_string(rows_) + "x" + std::to_string(cols_) + " and " +
                         std::to_string(rhs.rows_) + "x" + std::to_string(rhs.cols_));
    Matrix out(field_, rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Symbol a = (*this)(i, k);
            if (a == 0) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j)
                out(i, j) = field_.add(out(i, j), field_.mul(a, rhs(k, j)));
        }
    return out;
}

Vector Matrix::apply(std::span<const Symbol> x) const {
    if (x.size() != cols_)
        throw ShapeError("vector length " + std::to_string(x.size()) + " != " + std::to_string(cols_));
    Vector y(rows_, 0);
    for (std::size_t i = 0; i < rows_; ++i) {
        Symbol acc = 0;
        for (std::size_t k = 0; k < cols_; ++k) acc = field_.add(acc, field_.mul((*this)(i, k), x[k]));
        y[i] = acc;
    }
    return y;
}

Matrix Matrix::transpose() const {
    Matrix t(field_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix Matrix::stacked(const Matrix& below) const {
    if (below.cols_ != cols_) throw ShapeError("stacking matrices with different column counts");
    std::vector<Symbol> data = data_;
    data.insert(data.end(), below.data_.begin(), below.data_.end());
    return Matrix(field_, rows_ + below.rows_, cols_, std::move(data));
}

Matrix Matrix::row_block(std::size_t first, std::size_t count) const {
    if (first + count > rows_) throw ShapeError("row block out of range");
    return Matrix(field_, count, cols_,
                  std::vector<Symbol>(data_.begin() + first * cols_, data_.begin() + (first + count) * cols_));
}

bool Matrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](Symbol s) { return s == 0; });
}

Echelon row_reduce(Matrix m) {
    const Field& f = m.field();
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t sel = r;
        while (sel < m.rows() && m(sel, c) == 0) ++sel;
        if (sel == m.rows()) continue;
        if (sel != r)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(sel, j), m(r, j));
        const Symbol scale = f.inv(m(r, c));
        for (std::size_t j = c; j < m.cols(); ++j) m(r, j) = f.mul(m(r, j), scale);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c) == 0) continue;
            const Symbol factor = m(i, c);
            for (std::size_t j = c; j < m.cols(); ++j) m(i, j) = f.sub(m(i, j), f.mul(factor, m(r, j)));
        }
        pivots.push_back(c);
        ++r;
    }
    return {std::move(m), std::move(pivots)};
}

std::size_t rank(const Matrix& m) { return row_reduce(m).pivot_cols.size(); }

Matrix kernel_basis(const Matrix& m) {
    const Echelon e = row_reduce(m);
    const Field& f = m.field();
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : e.pivot_cols) is_pivot[c] = true;
    const std::size_t dim = m.cols() - e.pivot_cols.size();
    Matrix basis(f, m.cols(), dim);
    std::size_t k = 0;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        basis(free, k) = 1;
        for (std::size_t i = 0; i < e.pivot_cols.size(); ++i)
            basis(e.pivot_cols[i], k) = f.neg(e.reduced(i, free));
        ++k;
    }
    return basis;
}

Matrix inverse(const Matrix& m) {
    if (m.rows() != m.cols())
        throw ShapeError("inverse of non-square " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    const std::size_t n = m.rows();
    Matrix aug(m.field(), n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = 1;
    }
    const Echelon e = row_reduce(std::move(aug));
    if (e.pivot_cols.size() < n || e.pivot_cols[n - 1] != n - 1)
        throw SingularMatrix(std::to_string(n) + "x" + std::to_string(n) + " matrix is singular");
    Matrix inv(m.field(), n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.reduced(i, n + j);
    return inv;
}

std::optional<std::uint64_t> checked_pow(std::uint64_t q, std::size_t k) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < k; ++i) {
        if (r > UINT64_MAX / q) return std::nullopt;
        r *= q;
    }
    return r;
}

std::optional<std::uint64_t> gl_order(std::size_t dim, std::uint32_t q) {
    const auto qd = checked_pow(q, dim);
    if (!qd) return std::nullopt;
    std::uint64_t order = 1;
    for (std::size_t i = 0; i < dim; ++i) {
        const std::uint64_t factor = *qd - *checked_pow(q, i);
        if (order > UINT64_MAX / factor) return std::nullopt;
        order *= factor;
    }
    return order;
}

std::uint64_t vector_index(std::span<const Symbol> v, std::uint32_t q) {
    std::uint64_t idx = 0;
    for (std::size_t i = v.size(); i-- > 0;) idx = idx * q + v[i];
    return idx;
}

Vector vector_from_index(std::uint64_t index, std::size_t len, std::uint32_t q) {
    Vector v(len);
    for (std::size_t i = 0; i < len; ++i) {
        v[i] = static_cast<Symbol>(index % q);
        index /= q;
    }
    return v;
}

namespace {

// Incrementally maintained reduced basis of a row space.
class RowSpace {
public:
    RowSpace(const Field& f, std::size_t dim) : f_(f), dim_(dim), pivot_of_(dim, kNone) {}

    std::size_t size() const { return rows_.size(); }
    std::size_t free_count() const { return dim_ - rows_.size(); }

    // Component of v with zeros in all pivot columns. Zero iff v is in the span.
    Vector residual(Vector v) const {
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            const Symbol c = v[pivots_[i]];
            if (c == 0) continue;
            for (std::size_t j = 0; j < dim_; ++j) v[j] = f_.sub(v[j], f_.mul(c, rows_[i][j]));
        }
        return v;
    }

    // Adds a nonzero residual (as returned by residual()).
    void insert(Vector w) {
        std::size_t piv = 0;
        while (w[piv] == 0) ++piv;
        const Symbol s = f_.inv(w[piv]);
        for (auto& x : w) x = f_.mul(x, s);
        for (auto& row : rows_) {
            const Symbol c = row[piv];
            if (c == 0) continue;
            for (std::size_t j = 0; j < dim_; ++j) row[j] = f_.sub(row[j], f_.mul(c, w[j]));
        }
        pivot_of_[piv] = rows_.size();
        pivots_.push_back(piv);
        rows_.push_back(std::move(w));
    }

    // Maps (coefficients on the basis, residual on the free columns) to a vector.
    Vector compose(std::span<const Symbol> coeffs, std::span<const Symbol> free_part) const {
        Vector v(dim_, 0);
        std::size_t k = 0;
        for (std::size_t j = 0; j < dim_; ++j)
            if (pivot_of_[j] == kNone) v[j] = free_part[k++];
        for (std::size_t i = 0; i < rows_.size(); ++i)
            for (std::size_t j = 0; j < dim_; ++j) v[j] = f_.add(v[j], f_.mul(coeffs[i], rows_[i][j]));
        return v;
    }

private:
    static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    const Field& f_;
    std::size_t dim_;
    std::vector<Vector> rows_;
    std::vector<std::size_t> pivots_;
    std::vector<std::size_t> pivot_of_;
};

Vector uniform_nonzero(std::size_t len, std::uint32_t q, Rng& rng) {
    const auto total = checked_pow(q, len);
    if (total && *total <= (1ULL << 62)) return vector_from_index(1 + rng.uniform(*total - 1), len, q);
    // q^len > 2^62: an all-zero draw has probability below 2^-62.
    Vector v(len);
    do {
        for (auto& x : v) x = static_cast<Symbol>(rng.uniform(q));
    } while (std::all_of(v.begin(), v.end(), [](Symbol s) { return s == 0; }));
    return v;
}

void enumerate_rows(const Field& f, std::size_t dim, RowSpace& space, std::vector<Symbol>& prefix,
                    std::vector<Matrix>& out) {
    if (space.size() == dim) {
        out.emplace_back(f, dim, dim, prefix);
        return;
    }
    const std::uint64_t total = *checked_pow(f.q(), dim);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        // Lexicographic order of entries: coordinate 0 most significant.
        Vector v = vector_from_index(idx, dim, f.q());
        std::reverse(v.begin(), v.end());
        Vector w = space.residual(v);
        if (std::all_of(w.begin(), w.end(), [](Symbol s) { return s == 0; })) continue;
        RowSpace next = space;
        next.insert(std::move(w));
        prefix.insert(prefix.end(), v.begin(), v.end());
        enumerate_rows(f, dim, next, prefix, out);
        prefix.resize(prefix.size() - dim);
    }
}

}  // namespace

Matrix sample_full_rank(std::size_t rows, std::size_t cols, const Field& field, Rng& rng) {
    if (rows > cols) throw ShapeError("full row rank needs rows <= cols");
    RowSpace space(field, cols);
    Matrix out(field, rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        Vector coeffs(space.size());
        for (auto& c : coeffs) c = static_cast<Symbol>(rng.uniform(field.q()));
        const Vector free_part = uniform_nonzero(space.free_count(), field.q(), rng);
        Vector v = space.compose(coeffs, free_part);
        std::copy(v.begin(), v.end(), out.row(r).begin());
        space.insert(space.residual(std::move(v)));
    }
    return out;
}

std::vector<Matrix> enumerate_gl(std::size_t dim, const Field& field, std::uint64_t cap) {
    const auto order = gl_order(dim, field.q());
    if (!order || *order > cap)
        throw EnumerationTooLarge("|GL(" + std::to_string(dim) + "," + std::to_string(field.q()) +
                                  ")| exceeds cap " + std::to_string(cap));
    std::vector<Matrix> out;
    out.reserve(*order);
    RowSpace space(field, dim);
    std::vector<Symbol> prefix;
    enumerate_rows(field, dim, space, prefix, out);
    return out;
}

}  // namespace muxnet
