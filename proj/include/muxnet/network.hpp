#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "muxnet/matrix.hpp"

namespace muxnet {

struct LinkSpec {
    std::string id;
    std::string tail;
    std::string head;
};

// Acyclic, delay-free directed multigraph with one source. Links are addressed
// by their index in links(); node ids by their index in nodes().
class Network {
public:
    struct Link {
        std::string id;
        std::size_t tail;
        std::size_t head;
    };

    // Throws NetworkError for unknown nodes, self-loops, duplicate ids or an
    // incoming link at the source, and CycleDetected for directed cycles.
    Network(std::vector<std::string> nodes, std::string source, std::vector<std::string> sinks,
            std::vector<LinkSpec> links);

    const std::vector<std::string>& nodes() const { return nodes_; }
    const std::vector<Link>& links() const { return links_; }
    std::size_t source() const { return source_; }
    const std::vector<std::size_t>& sinks() const { return sinks_; }
    const std::vector<std::size_t>& in_links(std::size_t node) const { return in_[node]; }
    const std::vector<std::size_t>& out_links(std::size_t node) const { return out_[node]; }
    const std::vector<std::size_t>& topological_order() const { return topo_; }

    std::size_t node_index(const std::string& id) const;
    std::size_t link_index(const std::string& id) const;

    // Throws NetworkError unless the source has at least n outgoing links.
    void check_supports(std::size_t n) const;

private:
    std::vector<std::string> nodes_;
    std::map<std::string, std::size_t> node_ids_;
    std::map<std::string, std::size_t> link_ids_;
    std::vector<Link> links_;
    std::size_t source_ = 0;
    std::vector<std::size_t> sinks_;
    std::vector<std::vector<std::size_t>> in_;
    std::vector<std::vector<std::size_t>> out_;
    std::vector<std::size_t> topo_;
};

// Local coding coefficients of every link for the slots of one block.
//
// The coefficients of link e form one entry per input of e's tail node: the
// tail's incoming links in in_links() order, or the n source inputs when the
// tail is the source. A single slot entry means the coding is slot-constant.
class LocalCoding {
public:
    static constexpr Symbol kUnset = static_cast<Symbol>(-1);
    using SlotCoefficients = std::vector<std::vector<Symbol>>;  // [link][input]

    LocalCoding(const Network& net, Field field, std::size_t inputs, std::size_t slots);

    const Field& field() const { return field_; }
    std::size_t inputs() const { return inputs_; }
    std::size_t slot_count() const { return slots_.size(); }
    bool slot_constant() const { return slots_.size() == 1; }

    void set(std::size_t slot, std::size_t link, std::size_t input, Symbol value);
    Symbol get(std::size_t slot, std::size_t link, std::size_t input) const;
    const SlotCoefficients& slot(std::size_t t) const;

private:
    Field field_;
    std::size_t inputs_;
    std::vector<SlotCoefficients> slots_;
};

// iid uniform coefficients; slot-constant unless slot_constant is false.
LocalCoding random_coding(const Network& net, const Field& field, std::size_t inputs, std::size_t m, Rng& rng,
                          bool slot_constant = true);

// Every coefficient set to value (source links included).
LocalCoding constant_coding(const Network& net, const Field& field, std::size_t inputs, Symbol value);

// Global coding vector in F_q^n of every link for one slot, computed in
// topological order. Throws MissingCoefficient for unset coefficients.
std::vector<Vector> global_coding_vectors(const Network& net, const LocalCoding& coding, std::size_t slot);

// Stacked global vectors of the sink's incoming links (in_links order).
Matrix sink_transfer(const Network& net, const LocalCoding& coding, std::size_t sink, std::size_t slot);

// True iff the sink's incoming global vectors span F_q^n.
bool check_decodability(const Network& net, const LocalCoding& coding, std::size_t sink, std::size_t slot);

// Butterfly: s->a, s->b, a->t1, a->c, b->c, b->t2, c->d, d->t1, d->t2
// (links e1..e9), sinks t1 and t2, n = 2.
Network butterfly_network();
// Standard coding: e1 carries input 1, e2 input 2, every other coefficient 1.
LocalCoding butterfly_coding(const Network& net, const Field& field);

// Source s with n = 3 inputs feeding relays u1..u4 (links s1..s4 carrying
// x1, x2, x3, x1+x2+x3); four sinks, each fed by a distinct triple of relays.
Network combination_network();
LocalCoding combination_coding(const Network& net, const Field& field);

}  // namespace muxnet
