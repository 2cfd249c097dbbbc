#include "muxnet/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "muxnet/error.hpp"
#include "muxnet/experiment.hpp"
#include "muxnet/privacy.hpp"

namespace muxnet {

namespace {

class Recorder {
public:
    explicit Recorder(std::vector<VerifyRecord>& out) : out_(out) {}

    void leq(const std::string& check, const std::string& instance, double lhs, double rhs, double slack) {
        out_.push_back({check, instance, lhs, rhs, lhs <= rhs + slack});
    }
    void eq(const std::string& check, const std::string& instance, double lhs, double rhs) {
        out_.push_back({check, instance, lhs, rhs, lhs == rhs});
    }
    void rational_leq(const std::string& check, const std::string& instance, Rational lhs, Rational rhs) {
        out_.push_back({check, instance, lhs.value(), rhs.value(), lhs <= rhs});
    }
    void rational_eq(const std::string& check, const std::string& instance, Rational lhs, Rational rhs) {
        out_.push_back({check, instance, lhs.value(), rhs.value(), lhs == rhs});
    }
    void truth(const std::string& check, const std::string& instance, bool ok) {
        out_.push_back({check, instance, ok ? 1.0 : 0.0, 1.0, ok});
    }

private:
    std::vector<VerifyRecord>& out_;
};

std::string layout_label(const MultiplexLayout& l) {
    std::string s = "q=" + std::to_string(l.q()) + " m=" + std::to_string(l.m()) + " n=" + std::to_string(l.n()) +
                    " k=(";
    for (std::size_t i = 0; i < l.k().size(); ++i) s += (i ? "," : "") + std::to_string(l.k()[i]);
    return s + ")";
}

Matrix random_matrix(const Field& f, std::size_t rows, std::size_t cols, Rng& rng) {
    Matrix m(f, rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = static_cast<Symbol>(rng.uniform(f.q()));
    return m;
}

// Compositions of total into 2..max_parts nonnegative parts.
std::vector<std::vector<std::size_t>> compositions(std::size_t total, std::size_t max_parts) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t left) {
        if (cur.size() + 1 >= 2) {
            cur.push_back(left);
            out.push_back(cur);
            cur.pop_back();
        }
        if (cur.size() + 1 < max_parts)
            for (std::size_t v = 0; v <= left; ++v) {
                cur.push_back(v);
                rec(left - v);
                cur.pop_back();
            }
    };
    rec(total);
    return out;
}

void field_axioms(Recorder& rec) {
    for (std::uint32_t q : {2u, 3u, 4u, 5u, 7u, 8u, 9u, 16u, 25u, 27u}) {
        const Field f = Field::of_size(q);
        std::size_t bad = 0;
        for (Symbol a = 0; a < q; ++a) {
            if (a != 0 && f.mul(a, f.inv(a)) != 1) ++bad;
            if (f.add(a, f.neg(a)) != 0) ++bad;
            for (Symbol b = 0; b < q; ++b) {
                if (f.add(a, b) != f.add(b, a) || f.mul(a, b) != f.mul(b, a)) ++bad;
                for (Symbol c = 0; c < q; c += (q > 9 ? 3 : 1))
                    if (f.mul(a, f.add(b, c)) != f.add(f.mul(a, b), f.mul(a, c)) ||
                        f.mul(a, f.mul(b, c)) != f.mul(f.mul(a, b), c))
                        ++bad;
            }
        }
        rec.eq("field_axioms", "GF(" + std::to_string(q) + ")", static_cast<double>(bad), 0.0);
    }
}

void field_inverses(Recorder& rec) {
    for (std::uint32_t q = 2; q <= 256; ++q) {
        std::uint32_t p = 2;
        while (q % p) ++p;
        std::uint32_t r = q;
        while (r % p == 0) r /= p;
        if (r != 1) continue;
        const Field f = Field::of_size(q);
        std::size_t bad = 0;
        for (Symbol a = 1; a < q; ++a) bad += f.mul(a, f.inv(a)) != 1;
        rec.eq("field_inverse", "GF(" + std::to_string(q) + ")", static_cast<double>(bad), 0.0);
    }
}

void linalg_suites(Recorder& rec, Rng& rng) {
    for (std::uint32_t q : {2u, 3u, 4u, 7u, 16u, 251u}) {
        const Field f = Field::of_size(q);
        for (int t = 0; t < 40; ++t) {
            const std::size_t rows = 1 + rng.uniform(6), cols = 1 + rng.uniform(6);
            // Low-rank products as well as plain random matrices.
            Matrix M = random_matrix(f, rows, cols, rng);
            if (t % 2) {
                const std::size_t inner = 1 + rng.uniform(3);
                M = random_matrix(f, rows, inner, rng) * random_matrix(f, inner, cols, rng);
            }
            const std::string inst = "GF(" + std::to_string(q) + ") " + std::to_string(rows) + "x" +
                                     std::to_string(cols) + " #" + std::to_string(t);
            rec.eq("rank_nullity", inst, static_cast<double>(rank(M) + kernel_basis(M).cols()),
                   static_cast<double>(cols));
            const Matrix S = random_matrix(f, rows, rows, rng);
            if (rank(S) == rows) {
                const Matrix Si = inverse(S), I = Matrix::identity(f, rows);
                rec.truth("inverse_round_trip", inst, S * Si == I && Si * S == I);
            }
            const Matrix G = sample_gl(rows, f, rng);
            bool invertible = true;
            try {
                invertible = G * inverse(G) == Matrix::identity(f, rows);
            } catch (const SingularMatrix&) {
                invertible = false;
            }
            rec.truth("sample_gl_invertible", inst, invertible);
        }
    }
}

void encoder_suites(Recorder& rec, Rng& rng) {
    const std::vector<MultiplexLayout> bijection{MultiplexLayout(2, 2, 3, {2, 3, 1}), MultiplexLayout(3, 1, 3, {1, 1, 1}),
                                                 MultiplexLayout(4, 2, 2, {2, 2}), MultiplexLayout(16, 1, 3, {1, 2})};
    for (const auto& layout : bijection) {
        const Field f = Field::of_size(layout.q());
        const std::size_t mn = layout.block_length();
        const MultiplexEncoder enc(layout, sample_gl(mn, f, rng));
        const std::uint64_t total = *checked_pow(layout.q(), mn);
        std::set<std::uint64_t> images;
        std::size_t round_trip_failures = 0;
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            const MessageTuple msgs = split(layout, vector_from_index(idx, mn, layout.q()));
            const Vector x = enc.encode(msgs);
            images.insert(vector_index(x, layout.q()));
            round_trip_failures += enc.decode(x) != msgs;
        }
        rec.eq("encode_bijection", layout_label(layout), static_cast<double>(images.size()),
               static_cast<double>(total));
        rec.eq("decode_round_trip", layout_label(layout), static_cast<double>(round_trip_failures), 0.0);
    }
    for (std::uint32_t q : {2u, 3u, 4u, 16u, 256u}) {
        const MultiplexLayout layout(q, 2, 2, {1, 2, 1});
        const Field f = Field::of_size(q);
        std::size_t bad = 0, proj_bad = 0;
        for (int t = 0; t < 20; ++t) {
            const Matrix L = sample_gl(4, f, rng);
            const Symbol a = static_cast<Symbol>(rng.uniform(q));
            const Vector u = concat(layout, random_messages(layout, rng));
            const Vector v = concat(layout, random_messages(layout, rng));
            Vector w(4), ex(4);
            for (std::size_t i = 0; i < 4; ++i) w[i] = f.add(f.mul(a, u[i]), v[i]);
            const Vector eu = encode(layout, L, split(layout, u)), ev = encode(layout, L, split(layout, v));
            for (std::size_t i = 0; i < 4; ++i) ex[i] = f.add(f.mul(a, eu[i]), ev[i]);
            bad += encode(layout, L, split(layout, w)) != ex;
            for (const auto& I : layout.nonempty_subsets()) {
                Vector blocks;
                const MessageTuple mu = split(layout, u);
                for (auto i : I.members()) blocks.insert(blocks.end(), mu.blocks[i - 1].begin(), mu.blocks[i - 1].end());
                proj_bad += projection_matrix(layout, f, I).apply(u) != blocks;
            }
        }
        rec.eq("encode_linearity", layout_label(layout), static_cast<double>(bad), 0.0);
        rec.eq("projection_blocks", layout_label(layout), static_cast<double>(proj_bad), 0.0);
    }
}

void two_universality(Recorder& rec) {
    for (std::uint32_t q : {2u, 3u}) {
        const Field f = Field::of_size(q);
        for (std::size_t mn = 1; mn <= 4; ++mn)
            for (const auto& k : compositions(mn, 4)) {
                const MultiplexLayout layout(q, 1, mn, k);
                for (const auto& I : layout.nonempty_subsets()) {
                    const Rational p = hash_collision_probability(layout, I);
                    const Rational bound(1, *checked_pow(q, layout.k_sum(I)));
                    const std::string inst = layout_label(layout) + " I=" + I.label();
                    rec.rational_leq("two_universal", inst, p, bound);
                    if (mn <= 2 || (q == 2 && mn == 3 && k.size() == 2)) {
                        const Rational e = hash_collision_probability_enumerated(layout, f, I);
                        rec.rational_eq("collision_enumerated", inst, e, p);
                    }
                }
            }
    }
}

void leakage_suites(Recorder& rec, Rng& rng, const VerifySpec& spec) {
    const Field f2 = Field::of_size(2);
    struct Case {
        std::uint32_t q;
        std::size_t m, n;
        std::vector<std::size_t> k;
    };
    const std::vector<Case> cases{{2, 1, 2, {1, 1}},    {2, 2, 1, {1, 1}},    {2, 1, 3, {1, 1, 1}},
                                  {2, 1, 4, {2, 1, 1}}, {2, 2, 2, {1, 2, 1}}, {3, 1, 3, {1, 2}},
                                  {4, 1, 2, {1, 1}},    {3, 2, 2, {2, 1, 1}}};
    for (const auto& c : cases) {
        const Field f = Field::of_size(c.q);
        const MultiplexLayout layout(c.q, c.m, c.n, c.k);
        const std::size_t mn = layout.block_length();
        std::vector<Matrix> keys;
        if (mn == 2 && c.q == 2) keys = enumerate_gl(2, f2);
        else
            for (int t = 0; t < 6; ++t) keys.push_back(sample_gl(mn, f, rng));
        for (const Matrix& L : keys)
            for (std::size_t rows = 0; rows <= mn; ++rows)
                for (int t = 0; t < 3; ++t) {
                    const Matrix B = random_matrix(f, rows, mn, rng);
                    const std::string inst = layout_label(layout) + " rows=" + std::to_string(rows);
                    for (const auto& I : layout.nonempty_subsets()) {
                        const auto ex = exact_leakage(layout, L, B, I);
                        const double bf = brute_force_leakage(layout, L, B, I);
                        rec.leq("oracle_equivalence", inst + " I=" + I.label(), std::abs(ex.nats - bf),
                                spec.oracle_tolerance, 0.0);
                        const double r = ex.nats / f.log_q();
                        rec.leq("quantization", inst + " I=" + I.label(), std::abs(r - std::round(r)), 0.0,
                                spec.tolerance);
                        rec.leq("kernel_dim_bound", inst + " I=" + I.label(), static_cast<double>(ex.kernel_dim),
                                static_cast<double>(std::min(ex.k_subset, mn - ex.rank_B)), 0.0);
                    }
                }
    }

    // Converse floor for full-rank observations, rows added, post-processing.
    for (std::uint32_t q : {2u, 3u, 16u}) {
        const Field f = Field::of_size(q);
        for (std::size_t m = 1; m <= 3; ++m) {
            const std::size_t n = 2, mu = 1;
            const MultiplexLayout layout(q, m, n, {m + 1, m - 1});
            for (int t = 0; t < 10; ++t) {
                const Matrix L = sample_gl(m * n, f, rng);
                const Matrix B = sample_full_rank(mu * m, m * n, f, rng);
                const Matrix extra = B.stacked(random_matrix(f, 1, m * n, rng));
                const Matrix mixed = random_matrix(f, 1 + rng.uniform(mu * m), mu * m, rng) * B;
                for (const auto& I : layout.nonempty_subsets()) {
                    const std::string inst = layout_label(layout) + " I=" + I.label();
                    const double v = exact_leakage(layout, L, B, I).nats;
                    const double floor =
                        std::max(0.0, double(layout.k_sum(I)) - double(m * (n - mu))) * f.log_q();
                    rec.leq("leakage_floor", inst, floor, v, spec.tolerance);
                    rec.leq("rows_monotone", inst, v, exact_leakage(layout, L, extra, I).nats, spec.tolerance);
                    rec.leq("data_processing", inst, exact_leakage(layout, L, mixed, I).nats, v, spec.tolerance);
                }
            }
        }
    }
}

void netsim_suites(Recorder& rec, Rng& rng) {
    for (std::uint32_t q : {2u, 3u, 16u}) {
        const Field f = Field::of_size(q);
        for (const Network& net : {butterfly_network(), combination_network()}) {
            const std::size_t n = net.out_links(net.source()).size() == 2 ? 2 : 3;
            const std::string name = n == 2 ? "butterfly" : "combination";
            for (std::size_t m = 1; m <= 3; ++m) {
                const MultiplexLayout layout(q, m, n, {m, m * n - m});
                const LocalCoding coding = random_coding(net, f, n, m, rng);
                for (std::size_t mu = 1; mu <= std::min<std::size_t>(n, 2); ++mu) {
                    std::size_t rank_bad = 0, block_bad = 0;
                    for (const auto& s : enumerate_eavesdropper_sets(net, mu)) {
                        const auto em = eavesdrop_matrix(net, coding, std::vector<LinkSet>(m, s), layout);
                        rank_bad += em.rank > mu * m;
                        for (std::size_t r = 0; r < mu * m; ++r)
                            for (std::size_t c = 0; c < m * n; ++c) {
                                const Symbol want = c / n == r / mu ? em.B(r % mu, c % n) : 0;
                                block_bad += em.B(r, c) != want;
                            }
                    }
                    const std::string inst = name + " q=" + std::to_string(q) + " m=" + std::to_string(m) +
                                             " mu=" + std::to_string(mu);
                    rec.eq("rank_B_bound", inst, static_cast<double>(rank_bad), 0.0);
                    rec.eq("block_diagonal", inst, static_cast<double>(block_bad), 0.0);
                }
            }
            std::size_t mismatch = 0;
            for (int t = 0; t < 10; ++t) {
                const LocalCoding coding = random_coding(net, f, n, 1, rng);
                for (auto sink : net.sinks()) {
                    const Matrix G = sink_transfer(net, coding, sink, 0);
                    const Matrix A = sample_gl(G.rows(), f, rng);
                    mismatch += (rank(A * G) == n) != check_decodability(net, coding, sink, 0);
                }
            }
            rec.eq("decodability_invariance", name + " q=" + std::to_string(q), static_cast<double>(mismatch), 0.0);
            const Rng seeded = rng.split("determinism", q);
            Rng a = seeded, b = seeded;
            rec.truth("global_vectors_deterministic", name + " q=" + std::to_string(q),
                      global_coding_vectors(net, random_coding(net, f, n, 1, a), 0) ==
                          global_coding_vectors(net, random_coding(net, f, n, 1, b), 0));
        }
    }
}

void privacy_suites(Recorder& rec, Rng& rng, const VerifySpec& spec) {
    {
        JointDistribution j{4, 2, std::vector<double>(8, 0.0)};
        for (std::size_t x = 0; x < 4; ++x) j.p[x * 2 + (x & 1)] = 0.25;
        const auto fam = HashFamily::multiplex(MultiplexLayout(2, 1, 2, {1, 1}), Field::of_size(2), {1});
        const auto c = verify_theorem2(j, fam, 1.0, spec.tolerance);
        rec.leq("amplification_hand_lhs", "X uniform on F_2^2, Z = X_1", std::abs(c.lhs - 4.0 / 3.0), 0.0, 1e-12);
        rec.leq("amplification_hand_rhs", "X uniform on F_2^2, Z = X_1", std::abs(c.rhs - 2.0), 0.0, 1e-12);
        rec.leq("amplification_bound", "hand instance rho=1", c.lhs, c.rhs, spec.tolerance);
        const auto z = verify_theorem2(j, fam, 0.0, spec.tolerance);
        rec.leq("amplification_bound", "hand instance rho=0", z.lhs, z.rhs, spec.tolerance);
        const auto l = verify_lemma1(j, fam, 1.0, spec.tolerance);
        rec.leq("entropy_bound", "hand instance rho=1", l.lhs, l.rhs, spec.tolerance);
    }
    std::vector<std::pair<std::string, HashFamily>> families;
    for (std::uint32_t q : {2u, 3u, 4u}) {
        const MultiplexLayout layout(q, 1, 2, {1, 1});
        families.emplace_back("alpha_1 L, GL(2," + std::to_string(q) + ")",
                              HashFamily::multiplex(layout, Field::of_size(q), {1}));
    }
    for (const auto& [name, fam] : families)
        rec.truth("family_two_universal", name, fam.is_two_universal());
    for (std::size_t t = 0; t < spec.joints; ++t) {
        const auto& [name, fam] = families[t % families.size()];
        const auto j = JointDistribution::dirichlet(fam.input_size, 1 + rng.uniform(8), rng);
        for (int r = 1; r <= 10; ++r) {
            const double rho = r / 10.0;
            const std::string inst = name + " joint " + std::to_string(t) + " |Z|=" + std::to_string(j.z_size) +
                                     " rho=" + format_number(rho);
            const auto a = verify_theorem2(j, fam, rho, spec.tolerance);
            rec.leq("amplification_bound", inst, a.lhs, a.rhs, spec.tolerance);
            const auto b = verify_lemma1(j, fam, rho, spec.tolerance);
            rec.leq("entropy_bound", inst, b.lhs, b.rhs, spec.tolerance);
        }
    }
}

std::size_t grid_argmin(const std::function<double(double)>& fn) {
    std::size_t best = 1;
    double best_v = fn(0.01);
    for (std::size_t i = 2; i <= 100; ++i) {
        const double v = fn(static_cast<double>(i) / 100.0);
        if (v <= best_v) {
            best_v = v;
            best = i;
        }
    }
    return best;
}

void bound_suites(Recorder& rec, Rng& rng, const VerifySpec& spec) {
    for (int t = 0; t < 20; ++t) {
        const std::uint32_t q = std::vector<std::uint32_t>{2, 3, 4, 16, 256}[rng.uniform(5)];
        const std::size_t m = 1 + rng.uniform(6), n = 2 + rng.uniform(3), mu = 1 + rng.uniform(n - 1);
        const std::size_t T = 1 + rng.uniform(3);
        const double C1 = default_markov_constant(T) + static_cast<double>(rng.uniform(20));
        std::vector<std::size_t> k5(T + 1, 0), k7(T + 1, 0);
        k5[0] = rng.uniform(m * (n - mu) + 1);
        k5[T] = m * n - k5[0];
        k7[0] = m * (n - mu) + rng.uniform(m * mu + 1);
        k7[T] = m * n - k7[0];
        const MultiplexLayout l5(q, m, n, k5), l7(q, m, n, k7);
        rec.eq("ub5_rho_argmin", layout_label(l5) + " mu=" + std::to_string(mu),
               static_cast<double>(
                   grid_argmin([&](double rho) { return ub_bounds(l5, {1}, mu, {rho, C1, C1}).ub5; })),
               100.0);
        rec.eq("ub7_rho_argmin", layout_label(l7) + " mu=" + std::to_string(mu),
               static_cast<double>(grid_argmin([&](double rho) { return ub7_bound(l7, {1}, mu, {rho, C1, C1}); })),
               100.0);
    }

    const Network net = butterfly_network();
    for (std::size_t T : {1u, 2u}) {
        const Field f = Field::of_size(2);
        const MultiplexLayout layout = T == 1 ? MultiplexLayout(2, 2, 2, {1, 3}) : MultiplexLayout(2, 2, 2, {1, 1, 2});
        const BoundParams p = BoundParams::defaults(T);
        const auto g = guarantee_experiment(layout, net, butterfly_coding(net, f), 1, p, rng, 100);
        rec.leq("guarantee_fraction", layout_label(layout), g.prob_l - 3.0 * g.sigma, g.fraction_good, 0.0);
    }

    // Shrinking C1 C2 only widens the set of subsets the certificate covers.
    const Field f16 = Field::of_size(16);
    const MultiplexLayout layout(16, 5, 2, {1, 1, 8});
    for (int t = 0; t < 3; ++t) {
        const LocalCoding coding = random_coding(net, f16, 2, 5, rng);
        const Matrix L = sample_gl(10, f16, rng);
        std::size_t prev_applicable = 0;
        bool ok = true;
        for (double c : {1e6, 1e3, 100.0, 13.5}) {
            const auto r = certify_universal_zero(layout, net, coding, 1, {1.0, c, c}, L);
            ok = ok && r.applicable.size() >= prev_applicable;
            bool zero = true;
            const auto subsets = layout.nonempty_subsets();
            for (const auto& I : r.applicable) {
                const auto pos = std::find(subsets.begin(), subsets.end(), I) - subsets.begin();
                zero = zero && r.worst_nats[pos] == 0.0;
            }
            ok = ok && r.certified == zero;
            prev_applicable = r.applicable.size();
        }
        rec.truth("certification_monotone", layout_label(layout) + " trial " + std::to_string(t), ok);
    }
    (void)spec;
}

void experiment_suite(Recorder& rec, const ExperimentConfig& config) {
    for (const auto& r : run_simulate(config)) {
        const std::string inst = config.name + " block " + std::to_string(r.block) + " I=" + r.subset.label();
        rec.leq("report_floor", inst, r.floor_nats, r.leakage_nats, 1e-12);
        rec.leq("report_ceiling", inst, r.leakage_nats, r.ceiling_nats, 1e-12);
        if (r.decoded) rec.truth("zero_error_decoding", inst, *r.decoded);
    }
    std::ostringstream a, b;
    write_rows_csv(a, run_simulate(config));
    write_rows_csv(b, run_simulate(config));
    rec.truth("report_determinism", config.name, a.str() == b.str());
}

}  // namespace

std::vector<VerifyRecord> run_verify(const ExperimentConfig& config) {
    config.validate();
    std::vector<VerifyRecord> out;
    Recorder rec(out);
    const Rng root = Rng(config.seed).split("verify");
    Rng r1 = root.split("encoder"), r2 = root.split("leakage"), r3 = root.split("netsim"), r4 = root.split("privacy"),
        r5 = root.split("bounds");
    field_axioms(rec);
    field_inverses(rec);
    Rng r0 = root.split("linalg");
    linalg_suites(rec, r0);
    encoder_suites(rec, r1);
    two_universality(rec);
    leakage_suites(rec, r2, config.verify);
    netsim_suites(rec, r3);
    privacy_suites(rec, r4, config.verify);
    bound_suites(rec, r5, config.verify);
    experiment_suite(rec, config);
    return out;
}

std::vector<VerifySummary> summarize(const std::vector<VerifyRecord>& records) {
    std::vector<VerifySummary> out;
    std::map<std::string, std::size_t> index;
    for (const auto& r : records) {
        auto [it, inserted] = index.emplace(r.check, out.size());
        if (inserted) out.push_back({r.check, 0, 0});
        auto& s = out[it->second];
        ++s.instances;
        s.failures += !r.holds;
    }
    return out;
}

void write_verify_csv(std::ostream& out, const std::vector<VerifyRecord>& records) {
    out << "check,instance,lhs,rhs,holds\n";
    for (const auto& r : records)
        out << r.check << ",\"" << r.instance << "\"," << format_number(r.lhs) << ',' << format_number(r.rhs) << ','
            << (r.holds ? 1 : 0) << '\n';
}

void write_verify_json(std::ostream& out, const std::vector<VerifyRecord>& records) {
    out << "[";
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        out << (i ? ",\n " : "\n ") << "{\"check\": " << nlohmann::json(r.check).dump()
            << ", \"instance\": " << nlohmann::json(r.instance).dump() << ", \"lhs\": " << format_number(r.lhs)
            << ", \"rhs\": " << format_number(r.rhs) << ", \"holds\": " << (r.holds ? "true" : "false") << "}";
    }
    out << (records.empty() ? "]\n" : "\n]\n");
}

}  // namespace muxnet
