#include "muxnet/network.hpp"

#include <algorithm>
#include <deque>

#include "muxnet/error.hpp"

namespace muxnet {

Network::Network(std::vector<std::string> nodes, std::string source, std::vector<std::string> sinks,
                 std::vector<LinkSpec> links)
    : nodes_(std::move(nodes)) {
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (!node_ids_.emplace(nodes_[i], i).second) throw NetworkError("duplicate node id '" + nodes_[i] + "'");
    source_ = node_index(source);
    for (const auto& s : sinks) {
        const std::size_t idx = node_index(s);
        if (idx == source_) throw NetworkError("source cannot be a sink");
        sinks_.push_back(idx);
    }
    in_.resize(nodes_.size());
    out_.resize(nodes_.size());
    for (auto& spec : links) {
        const std::size_t tail = node_index(spec.tail);
        const std::size_t head = node_index(spec.head);
        if (tail == head) throw NetworkError("self-loop on link '" + spec.id + "'");
        if (head == source_) throw NetworkError("link '" + spec.id + "' enters the source");
        if (!link_ids_.emplace(spec.id, links_.size()).second)
            throw NetworkError("duplicate link id '" + spec.id + "'");
        out_[tail].push_back(links_.size());
        in_[head].push_back(links_.size());
        links_.push_back({std::move(spec.id), tail, head});
    }

    // Kahn's algorithm; ties broken by node index so the order is reproducible.
    std::vector<std::size_t> indeg(nodes_.size());
    for (std::size_t v = 0; v < nodes_.size(); ++v) indeg[v] = in_[v].size();
    std::deque<std::size_t> ready;
    for (std::size_t v = 0; v < nodes_.size(); ++v)
        if (indeg[v] == 0) ready.push_back(v);
    while (!ready.empty()) {
        const std::size_t v = ready.front();
        ready.pop_front();
        topo_.push_back(v);
        for (auto e : out_[v])
            if (--indeg[links_[e].head] == 0) ready.push_back(links_[e].head);
    }
    if (topo_.size() != nodes_.size()) throw CycleDetected("network contains a directed cycle");
}

std::size_t Network::node_index(const std::string& id) const {
    const auto it = node_ids_.find(id);
    if (it == node_ids_.end()) throw NetworkError("unknown node '" + id + "'");
    return it->second;
}

std::size_t Network::link_index(const std::string& id) const {
    const auto it = link_ids_.find(id);
    if (it == link_ids_.end()) throw NetworkError("unknown link '" + id + "'");
    return it->second;
}

void Network::check_supports(std::size_t n) const {
    if (out_[source_].size() < n)
        throw NetworkError("source has " + std::to_string(out_[source_].size()) + " outgoing links, needs n = " +
                           std::to_string(n));
}

LocalCoding::LocalCoding(const Network& net, Field field, std::size_t inputs, std::size_t slots)
    : field_(std::move(field)), inputs_(inputs) {
    if (slots == 0) throw WrongSlotCount("coding needs at least one slot");
    SlotCoefficients shape(net.links().size());
    for (std::size_t e = 0; e < net.links().size(); ++e) {
        const std::size_t tail = net.links()[e].tail;
        const std::size_t width = tail == net.source() ? inputs : net.in_links(tail).size();
        shape[e].assign(width, kUnset);
    }
    slots_.assign(slots, shape);
}

void LocalCoding::set(std::size_t slot, std::size_t link, std::size_t input, Symbol value) {
    if (slot >= slots_.size() || link >= slots_[slot].size() || input >= slots_[slot][link].size())
        throw ShapeError("coefficient index out of range");
    if (!field_.valid(value)) throw ShapeError("coefficient outside " + field_.describe());
    slots_[slot][link][input] = value;
}

Symbol LocalCoding::get(std::size_t slot, std::size_t link, std::size_t input) const {
    return this->slot(slot)[link][input];
}

const LocalCoding::SlotCoefficients& LocalCoding::slot(std::size_t t) const {
    if (slots_.size() == 1) return slots_[0];
    if (t >= slots_.size()) throw WrongSlotCount("slot " + std::to_string(t) + " beyond coding slots");
    return slots_[t];
}

LocalCoding random_coding(const Network& net, const Field& field, std::size_t inputs, std::size_t m, Rng& rng,
                          bool slot_constant) {
    const std::size_t slots = slot_constant ? 1 : m;
    LocalCoding coding(net, field, inputs, slots);
    for (std::size_t t = 0; t < slots; ++t)
        for (std::size_t e = 0; e < net.links().size(); ++e)
            for (std::size_t i = 0; i < coding.slot(t)[e].size(); ++i)
                coding.set(t, e, i, static_cast<Symbol>(rng.uniform(field.q())));
    return coding;
}

LocalCoding constant_coding(const Network& net, const Field& field, std::size_t inputs, Symbol value) {
    LocalCoding coding(net, field, inputs, 1);
    for (std::size_t e = 0; e < net.links().size(); ++e)
        for (std::size_t i = 0; i < coding.slot(0)[e].size(); ++i) coding.set(0, e, i, value);
    return coding;
}

std::vector<Vector> global_coding_vectors(const Network& net, const LocalCoding& coding, std::size_t slot) {
    const Field& f = coding.field();
    const std::size_t n = coding.inputs();
    const auto& coeffs = coding.slot(slot);
    if (coeffs.size() != net.links().size()) throw ShapeError("coding does not match network");
    std::vector<Vector> g(net.links().size());
    for (std::size_t v : net.topological_order()) {
        for (std::size_t e : net.out_links(v)) {
            const auto& c = coeffs[e];
            Vector out(n, 0);
            if (v == net.source()) {
                for (std::size_t j = 0; j < n; ++j) {
                    if (c[j] == LocalCoding::kUnset)
                        throw MissingCoefficient("link '" + net.links()[e].id + "' input " + std::to_string(j));
                    out[j] = c[j];
                }
            } else {
                const auto& ins = net.in_links(v);
                for (std::size_t i = 0; i < ins.size(); ++i) {
                    if (c[i] == LocalCoding::kUnset)
                        throw MissingCoefficient("link '" + net.links()[e].id + "' from link '" +
                                                 net.links()[ins[i]].id + "'");
                    if (c[i] == 0) continue;
                    for (std::size_t j = 0; j < n; ++j) out[j] = f.add(out[j], f.mul(c[i], g[ins[i]][j]));
                }
            }
            g[e] = std::move(out);
        }
    }
    return g;
}

Matrix sink_transfer(const Network& net, const LocalCoding& coding, std::size_t sink, std::size_t slot) {
    const auto g = global_coding_vectors(net, coding, slot);
    const auto& ins = net.in_links(sink);
    Matrix m(coding.field(), ins.size(), coding.inputs());
    for (std::size_t r = 0; r < ins.size(); ++r)
        for (std::size_t j = 0; j < coding.inputs(); ++j) m(r, j) = g[ins[r]][j];
    return m;
}

bool check_decodability(const Network& net, const LocalCoding& coding, std::size_t sink, std::size_t slot) {
    return rank(sink_transfer(net, coding, sink, slot)) == coding.inputs();
}

Network butterfly_network() {
    return Network({"s", "a", "b", "c", "d", "t1", "t2"}, "s", {"t1", "t2"},
                   {{"e1", "s", "a"},
                    {"e2", "s", "b"},
                    {"e3", "a", "t1"},
                    {"e4", "a", "c"},
                    {"e5", "b", "c"},
                    {"e6", "b", "t2"},
                    {"e7", "c", "d"},
                    {"e8", "d", "t1"},
                    {"e9", "d", "t2"}});
}

LocalCoding butterfly_coding(const Network& net, const Field& field) {
    LocalCoding coding = constant_coding(net, field, 2, 1);
    coding.set(0, net.link_index("e1"), 1, 0);
    coding.set(0, net.link_index("e2"), 0, 0);
    return coding;
}

Network combination_network() {
    std::vector<std::string> nodes{"s", "u1", "u2", "u3", "u4", "t1", "t2", "t3", "t4"};
    std::vector<LinkSpec> links;
    for (int i = 1; i <= 4; ++i) links.push_back({"s" + std::to_string(i), "s", "u" + std::to_string(i)});
    for (int i = 1; i <= 4; ++i)
        for (int j = 1; j <= 4; ++j)
            if (i != j)
                links.push_back({"u" + std::to_string(i) + "t" + std::to_string(j), "u" + std::to_string(i),
                                 "t" + std::to_string(j)});
    return Network(std::move(nodes), "s", {"t1", "t2", "t3", "t4"}, std::move(links));
}

LocalCoding combination_coding(const Network& net, const Field& field) {
    LocalCoding coding = constant_coding(net, field, 3, 1);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) coding.set(0, net.link_index("s" + std::to_string(i + 1)), j, i == j);
    return coding;
}

}  // namespace muxnet
