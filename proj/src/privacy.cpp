#include "muxnet/privacy.hpp"

#include <algorithm>
#include <cmath>

#include "muxnet/error.hpp"

namespace muxnet {

void JointDistribution::validate() const {
    if (p.size() != x_size * z_size) throw DomainError("joint table has the wrong size");
    double sum = 0.0;
    for (double v : p) {
        if (!(v >= 0.0)) throw DomainError("negative probability");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw DomainError("joint table sums to " + std::to_string(sum));
}

JointDistribution JointDistribution::dirichlet(std::size_t x_size, std::size_t z_size, Rng& rng) {
    JointDistribution j{x_size, z_size, std::vector<double>(x_size * z_size)};
    double sum = 0.0;
    for (auto& v : j.p) sum += (v = rng.exponential());
    for (auto& v : j.p) v /= sum;
    return j;
}

Rational HashFamily::collision_probability() const {
    std::uint64_t worst = 0;
    for (std::size_t a = 0; a < input_size; ++a)
        for (std::size_t b = a + 1; b < input_size; ++b) {
            std::uint64_t c = 0;
            for (const auto& f : functions) c += f[a] == f[b];
            worst = std::max(worst, c);
        }
    return Rational(worst, functions.size());
}

HashFamily HashFamily::multiplex(const MultiplexLayout& layout, const Field& field, const Subset& subset,
                                 std::uint64_t cap) {
    const std::size_t mn = layout.block_length();
    const Matrix proj = projection_matrix(layout, field, subset);
    HashFamily fam;
    fam.input_size = *checked_pow(field.q(), mn);
    fam.output_size = *checked_pow(field.q(), proj.rows());
    for (const Matrix& L : enumerate_gl(mn, field, cap)) {
        const Matrix h = proj * L;
        std::vector<std::size_t> f(fam.input_size);
        for (std::size_t x = 0; x < fam.input_size; ++x)
            f[x] = vector_index(h.apply(vector_from_index(x, mn, field.q())), field.q());
        fam.functions.push_back(std::move(f));
    }
    return fam;
}

double expected_conditional_power(const JointDistribution& joint, double rho) {
    double total = 0.0;
    for (std::size_t z = 0; z < joint.z_size; ++z) {
        double pz = 0.0;
        for (std::size_t x = 0; x < joint.x_size; ++x) pz += joint(x, z);
        if (pz <= 0.0) continue;
        for (std::size_t x = 0; x < joint.x_size; ++x) {
            const double pxz = joint(x, z);
            if (pxz > 0.0) total += pxz * std::pow(pxz / pz, rho);
        }
    }
    return total;
}

namespace {

// q(s, z) = sum over x with f(x) = s of p(x, z)
std::vector<double> hashed_joint(const JointDistribution& joint, const std::vector<std::size_t>& f,
                                 std::size_t output_size) {
    if (f.size() != joint.x_size) throw DomainError("hash function domain differs from |X|");
    std::vector<double> h(output_size * joint.z_size, 0.0);
    for (std::size_t x = 0; x < joint.x_size; ++x)
        for (std::size_t z = 0; z < joint.z_size; ++z) h[f[x] * joint.z_size + z] += joint(x, z);
    return h;
}

std::vector<double> z_marginal(const JointDistribution& joint) {
    std::vector<double> pz(joint.z_size, 0.0);
    for (std::size_t x = 0; x < joint.x_size; ++x)
        for (std::size_t z = 0; z < joint.z_size; ++z) pz[z] += joint(x, z);
    return pz;
}

}  // namespace

double hashed_mutual_information(const JointDistribution& joint, const std::vector<std::size_t>& f,
                                 std::size_t output_size) {
    const auto h = hashed_joint(joint, f, output_size);
    const auto pz = z_marginal(joint);
    std::vector<double> ps(output_size, 0.0);
    for (std::size_t s = 0; s < output_size; ++s)
        for (std::size_t z = 0; z < joint.z_size; ++z) ps[s] += h[s * joint.z_size + z];
    double mi = 0.0;
    for (std::size_t s = 0; s < output_size; ++s)
        for (std::size_t z = 0; z < joint.z_size; ++z) {
            const double v = h[s * joint.z_size + z];
            if (v > 0.0) mi += v * std::log(v / (ps[s] * pz[z]));
        }
    return std::max(mi, 0.0);
}

double hashed_conditional_entropy(const JointDistribution& joint, const std::vector<std::size_t>& f,
                                  std::size_t output_size) {
    const auto h = hashed_joint(joint, f, output_size);
    const auto pz = z_marginal(joint);
    double ent = 0.0;
    for (std::size_t s = 0; s < output_size; ++s)
        for (std::size_t z = 0; z < joint.z_size; ++z) {
            const double v = h[s * joint.z_size + z];
            if (v > 0.0) ent -= v * std::log(v / pz[z]);
        }
    return std::max(ent, 0.0);
}

InequalityCheck verify_theorem2(const JointDistribution& joint, const HashFamily& family, double rho,
                                double tolerance) {
    if (rho < 0.0 || rho > 1.0) throw DomainError("rho must lie in [0, 1]");
    if (family.functions.empty()) throw DomainError("empty hash family");
    double acc = 0.0;
    for (const auto& f : family.functions)
        acc += std::exp(rho * hashed_mutual_information(joint, f, family.output_size));
    InequalityCheck c;
    c.lhs = acc / static_cast<double>(family.functions.size());
    c.rhs = 1.0 + std::pow(static_cast<double>(family.output_size), rho) * expected_conditional_power(joint, rho);
    c.holds = c.lhs <= c.rhs + tolerance;
    return c;
}

InequalityCheck verify_lemma1(const JointDistribution& joint, const HashFamily& family, double rho,
                              double tolerance) {
    if (rho < 0.0 || rho > 1.0) throw DomainError("rho must lie in [0, 1]");
    if (family.functions.empty()) throw DomainError("empty hash family");
    double acc = 0.0;
    for (const auto& f : family.functions)
        acc += std::exp(-rho * hashed_conditional_entropy(joint, f, family.output_size));
    InequalityCheck c;
    c.lhs = acc / static_cast<double>(family.functions.size());
    c.rhs = std::pow(static_cast<double>(family.output_size), -rho) + expected_conditional_power(joint, rho);
    c.holds = c.lhs <= c.rhs + tolerance;
    return c;
}

}  // namespace muxnet
