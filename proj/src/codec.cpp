#include "muxnet/codec.hpp"

#include <algorithm>
#include <numeric>

#include "muxnet/error.hpp"

namespace muxnet {

Subset::Subset(std::vector<std::size_t> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    if (members_.empty()) throw LayoutError("subset must be nonempty");
    if (members_.front() == 0) throw LayoutError("subset members are 1-based");
}

Subset Subset::from_mask(std::uint64_t mask) {
    std::vector<std::size_t> m;
    for (std::size_t i = 0; i < 64; ++i)
        if (mask & (1ULL << i)) m.push_back(i + 1);
    return Subset(std::move(m));
}

bool Subset::contains(std::size_t i) const { return std::binary_search(members_.begin(), members_.end(), i); }

std::uint64_t Subset::mask() const {
    std::uint64_t mask = 0;
    for (auto i : members_) mask |= 1ULL << (i - 1);
    return mask;
}

std::string Subset::label() const {
    std::string s;
    for (auto i : members_) {
        if (!s.empty()) s += '+';
        s += std::to_string(i);
    }
    return s;
}

MultiplexLayout::MultiplexLayout(std::uint32_t q, std::size_t m, std::size_t n, std::vector<std::size_t> k)
    : q_(q), m_(m), n_(n), k_(std::move(k)) {
    if (m_ == 0 || n_ == 0) throw LayoutError("m and n must be positive");
    if (k_.size() < 2) throw LayoutError("need T >= 1 secret messages plus the padding block");
    if (k_.size() - 1 > 63) throw LayoutError("T is limited to 63 messages");
    const std::size_t sum = std::accumulate(k_.begin(), k_.end(), std::size_t{0});
    if (sum != m_ * n_)
        throw LayoutError("block lengths sum to " + std::to_string(sum) + ", expected m*n = " +
                          std::to_string(m_ * n_));
}

MultiplexLayout MultiplexLayout::with_padding(std::uint32_t q, std::size_t m, std::size_t n,
                                              std::vector<std::size_t> secret_lengths) {
    const std::size_t sum = std::accumulate(secret_lengths.begin(), secret_lengths.end(), std::size_t{0});
    if (sum > m * n)
        throw LayoutError("secret lengths sum to " + std::to_string(sum) + " > m*n = " + std::to_string(m * n));
    secret_lengths.push_back(m * n - sum);
    return MultiplexLayout(q, m, n, std::move(secret_lengths));
}

std::size_t MultiplexLayout::offset(std::size_t i) const {
    if (i == 0 || i > k_.size()) throw LayoutError("block index out of range");
    return std::accumulate(k_.begin(), k_.begin() + static_cast<std::ptrdiff_t>(i - 1), std::size_t{0});
}

void MultiplexLayout::check(const Subset& subset) const {
    if (subset.members().empty()) throw LayoutError("subset must be nonempty");
    if (subset.members().back() > secrets())
        throw LayoutError("subset {" + subset.label() + "} exceeds T = " + std::to_string(secrets()));
}

std::size_t MultiplexLayout::k_sum(const Subset& subset) const {
    check(subset);
    std::size_t s = 0;
    for (auto i : subset.members()) s += k_[i - 1];
    return s;
}

std::vector<Subset> MultiplexLayout::nonempty_subsets() const {
    std::vector<Subset> out;
    const std::uint64_t count = 1ULL << secrets();
    for (std::uint64_t mask = 1; mask < count; ++mask) out.push_back(Subset::from_mask(mask));
    return out;
}

Vector concat(const MultiplexLayout& layout, const MessageTuple& msgs) {
    if (msgs.blocks.size() != layout.k().size())
        throw ShapeError("expected " + std::to_string(layout.k().size()) + " message blocks");
    Vector s;
    s.reserve(layout.block_length());
    for (std::size_t i = 0; i < msgs.blocks.size(); ++i) {
        if (msgs.blocks[i].size() != layout.k()[i])
            throw ShapeError("block " + std::to_string(i + 1) + " has length " +
                             std::to_string(msgs.blocks[i].size()) + ", expected " + std::to_string(layout.k()[i]));
        s.insert(s.end(), msgs.blocks[i].begin(), msgs.blocks[i].end());
    }
    return s;
}

MessageTuple split(const MultiplexLayout& layout, std::span<const Symbol> s) {
    if (s.size() != layout.block_length())
        throw ShapeError("vector length " + std::to_string(s.size()) + " != mn = " +
                         std::to_string(layout.block_length()));
    MessageTuple out;
    std::size_t pos = 0;
    for (auto len : layout.k()) {
        out.blocks.emplace_back(s.begin() + static_cast<std::ptrdiff_t>(pos),
                                s.begin() + static_cast<std::ptrdiff_t>(pos + len));
        pos += len;
    }
    return out;
}

MessageTuple random_messages(const MultiplexLayout& layout, Rng& rng) {
    MessageTuple out;
    for (auto len : layout.k()) {
        Vector b(len);
        for (auto& x : b) x = static_cast<Symbol>(rng.uniform(layout.q()));
        out.blocks.push_back(std::move(b));
    }
    return out;
}

Matrix projection_matrix(const MultiplexLayout& layout, const Field& field, const Subset& subset) {
    if (field.q() != layout.q()) throw ShapeError("field does not match layout q");
    Matrix p(field, layout.k_sum(subset), layout.block_length());
    std::size_t row = 0;
    for (auto i : subset.members()) {
        const std::size_t off = layout.offset(i);
        for (std::size_t j = 0; j < layout.k()[i - 1]; ++j) p(row++, off + j) = 1;
    }
    return p;
}

namespace {

void check_key(const MultiplexLayout& layout, const Matrix& L) {
    if (L.rows() != layout.block_length() || L.cols() != layout.block_length())
        throw ShapeError("L must be " + std::to_string(layout.block_length()) + "x" +
                         std::to_string(layout.block_length()));
    if (L.field().q() != layout.q()) throw ShapeError("L field does not match layout q");
}

}  // namespace

Vector encode(const MultiplexLayout& layout, const Matrix& L, const MessageTuple& msgs) {
    check_key(layout, L);
    return inverse(L).apply(concat(layout, msgs));
}

MessageTuple decode(const MultiplexLayout& layout, const Matrix& L, std::span<const Symbol> x) {
    check_key(layout, L);
    if (x.size() != layout.block_length())
        throw ShapeError("received length " + std::to_string(x.size()) + " != mn = " +
                         std::to_string(layout.block_length()));
    // Fails with SingularMatrix exactly when encode would.
    (void)inverse(L);
    return split(layout, L.apply(x));
}

MultiplexEncoder::MultiplexEncoder(MultiplexLayout layout, Matrix L)
    : layout_(std::move(layout)), key_(std::move(L)), key_inv_(key_.field(), 0, 0) {
    check_key(layout_, key_);
    key_inv_ = inverse(key_);
}

Vector MultiplexEncoder::encode(const MessageTuple& msgs) const { return key_inv_.apply(concat(layout_, msgs)); }

MessageTuple MultiplexEncoder::decode(std::span<const Symbol> x) const {
    if (x.size() != layout_.block_length())
        throw ShapeError("received length " + std::to_string(x.size()) + " != mn = " +
                         std::to_string(layout_.block_length()));
    return split(layout_, key_.apply(x));
}

Rational hash_collision_probability(const MultiplexLayout& layout, const Subset& subset, std::uint64_t cap) {
    const std::size_t mn = layout.block_length();
    const auto order = gl_order(mn, layout.q());
    if (!order || *order > cap)
        throw EnumerationTooLarge("|GL(" + std::to_string(mn) + "," + std::to_string(layout.q()) + ")| exceeds cap");
    const Field field = Field::of_size(layout.q());
    const Matrix p = projection_matrix(layout, field, subset);
    const auto ker_size = checked_pow(layout.q(), mn - rank(p));
    const auto nonzero = checked_pow(layout.q(), mn);
    return Rational(*ker_size - 1, *nonzero - 1);
}

Rational hash_collision_probability_enumerated(const MultiplexLayout& layout, const Field& field,
                                               const Subset& subset, std::uint64_t cap) {
    const std::size_t mn = layout.block_length();
    const std::vector<Matrix> group = enumerate_gl(mn, field, cap);
    std::vector<std::size_t> rows;  // coordinates kept by alpha_I
    for (auto i : subset.members())
        for (std::size_t j = 0; j < layout.k()[i - 1]; ++j) rows.push_back(layout.offset(i) + j);
    const std::uint64_t vectors = *checked_pow(field.q(), mn);
    std::uint64_t worst = 0;
    for (std::uint64_t idx = 1; idx < vectors; ++idx) {
        const Vector d = vector_from_index(idx, mn, field.q());
        std::uint64_t collisions = 0;
        for (const auto& L : group) {
            bool zero = true;
            for (std::size_t r : rows) {
                Symbol acc = 0;
                for (std::size_t c = 0; c < mn; ++c) acc = field.add(acc, field.mul(L(r, c), d[c]));
                if (acc != 0) {
                    zero = false;
                    break;
                }
            }
            collisions += zero;
        }
        worst = std::max(worst, collisions);
    }
    return Rational(worst, group.size());
}

}  // namespace muxnet
