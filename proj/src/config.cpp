#include "muxnet/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "muxnet/error.hpp"

namespace muxnet {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ConfigError((path.empty() ? std::string("config") : path) + ": " + msg);
}

std::string child(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string item(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void expect_object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) fail(path, "expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j.items())
        if (!ok.count(key)) fail(child(path, key), "unknown key");
}

std::uint64_t as_uint(const json& j, const std::string& path) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
    if (j.is_number_float()) {
        const double v = j.get<double>();
        if (v >= 0 && v == std::floor(v) && v < 1.8e19) return static_cast<std::uint64_t>(v);
    }
    fail(path, "expected a nonnegative integer");
}

double as_double(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

bool as_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) fail(path, "expected true or false");
    return j.get<bool>();
}

const json& as_array(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array");
    return j;
}

std::vector<std::string> string_list(const json& j, const std::string& path) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < as_array(j, path).size(); ++i) out.push_back(as_string(j[i], item(path, i)));
    return out;
}

std::vector<std::vector<Symbol>> symbol_rows(const json& j, const std::string& path) {
    std::vector<std::vector<Symbol>> rows;
    for (std::size_t r = 0; r < as_array(j, path).size(); ++r) {
        const std::string rp = item(path, r);
        std::vector<Symbol> row;
        for (std::size_t c = 0; c < as_array(j[r], rp).size(); ++c)
            row.push_back(static_cast<Symbol>(as_uint(j[r][c], item(rp, c))));
        rows.push_back(std::move(row));
    }
    return rows;
}

void parse_network_body(const json& j, const std::string& path, NetworkSpec& spec, bool allow_file,
                        const std::filesystem::path& base_dir);

void parse_network_file(const std::filesystem::path& file, const std::string& path, NetworkSpec& spec) {
    std::ifstream in(file);
    if (!in) fail(path, "cannot open network file " + file.string());
    std::stringstream ss;
    ss << in.rdbuf();
    json j;
    try {
        j = json::parse(ss.str());
    } catch (const json::parse_error& e) {
        fail(path, std::string("network file ") + file.string() + ": " + e.what());
    }
    parse_network_body(j, path + "<" + file.filename().string() + ">", spec, false, file.parent_path());
}

void parse_coding(const json& j, const std::string& path, NetworkSpec& spec) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "random") spec.coding = NetworkSpec::Coding::Random;
        else if (s == "standard") spec.coding = NetworkSpec::Coding::Standard;
        else fail(path, "expected \"random\", \"standard\" or a coefficient map");
        return;
    }
    if (!j.is_object()) fail(path, "expected a string or a coefficient map");
    spec.coding = NetworkSpec::Coding::Explicit;
    spec.coefficients.clear();
    for (const auto& [link, inputs] : j.items()) {
        const std::string lp = child(path, link);
        if (!inputs.is_object()) fail(lp, "expected {input: coefficient}");
        for (const auto& [input, value] : inputs.items())
            spec.coefficients[link][input] = static_cast<Symbol>(as_uint(value, child(lp, input)));
    }
}

void parse_network_body(const json& j, const std::string& path, NetworkSpec& spec, bool allow_file,
                        const std::filesystem::path& base_dir) {
    expect_object(j, path, {"preset", "file", "nodes", "source", "sinks", "links", "coding", "slot_constant"});
    const bool has_preset = j.contains("preset"), has_file = j.contains("file"), has_inline = j.contains("nodes");
    if (has_preset + has_file + has_inline > 1) fail(path, "give exactly one of preset, file or nodes");
    if (has_file) {
        if (!allow_file) fail(child(path, "file"), "nested network files are not supported");
        parse_network_file(base_dir / as_string(j["file"], child(path, "file")), child(path, "file"), spec);
    } else if (has_inline) {
        spec.source = NetworkSpec::Source::Inline;
        spec.coding = NetworkSpec::Coding::Random;
        spec.nodes = string_list(j["nodes"], child(path, "nodes"));
        if (!j.contains("source")) fail(child(path, "source"), "missing");
        spec.source_node = as_string(j["source"], child(path, "source"));
        spec.sinks = j.contains("sinks") ? string_list(j["sinks"], child(path, "sinks")) : std::vector<std::string>{};
        if (!j.contains("links")) fail(child(path, "links"), "missing");
        spec.links.clear();
        const std::string lp = child(path, "links");
        for (std::size_t i = 0; i < as_array(j["links"], lp).size(); ++i) {
            const json& l = j["links"][i];
            const std::string ip = item(lp, i);
            expect_object(l, ip, {"id", "tail", "head"});
            for (const char* key : {"id", "tail", "head"})
                if (!l.contains(key)) fail(child(ip, key), "missing");
            spec.links.push_back({as_string(l["id"], child(ip, "id")), as_string(l["tail"], child(ip, "tail")),
                                  as_string(l["head"], child(ip, "head"))});
        }
    } else if (has_preset) {
        const std::string p = as_string(j["preset"], child(path, "preset"));
        if (p == "direct") {
            spec.source = NetworkSpec::Source::None;
        } else if (p == "butterfly" || p == "combination") {
            spec.source = NetworkSpec::Source::Preset;
            spec.preset = p;
        } else {
            fail(child(path, "preset"), "unknown preset \"" + p + "\" (butterfly, combination, direct)");
        }
    } else if (!j.contains("coding") && !j.contains("slot_constant")) {
        fail(path, "give one of preset, file or nodes");
    }
    if (j.contains("coding")) parse_coding(j["coding"], child(path, "coding"), spec);
    if (j.contains("slot_constant")) spec.slot_constant = as_bool(j["slot_constant"], child(path, "slot_constant"));
}

void parse_eavesdropper(const json& j, const std::string& path, EavesdropperSpec& spec) {
    expect_object(j, path, {"kind", "mu", "links", "weights", "matrices"});
    if (j.contains("kind")) {
        const std::string k = as_string(j["kind"], child(path, "kind"));
        if (k == "traditional") spec.kind = EavesdropperKind::Traditional;
        else if (k == "statistical") spec.kind = EavesdropperKind::Statistical;
        else if (k == "direct") spec.kind = EavesdropperKind::Direct;
        else fail(child(path, "kind"), "expected traditional, statistical or direct");
    }
    if (j.contains("mu")) spec.mu = as_uint(j["mu"], child(path, "mu"));
    if (j.contains("links")) {
        if (spec.kind != EavesdropperKind::Traditional) fail(child(path, "links"), "only for the traditional kind");
        spec.links = string_list(j["links"], child(path, "links"));
    }
    if (j.contains("weights")) {
        if (spec.kind != EavesdropperKind::Statistical) fail(child(path, "weights"), "only for the statistical kind");
        const std::string wp = child(path, "weights");
        for (std::size_t i = 0; i < as_array(j["weights"], wp).size(); ++i) {
            const json& w = j["weights"][i];
            const std::string ip = item(wp, i);
            expect_object(w, ip, {"links", "weight"});
            if (!w.contains("links")) fail(child(ip, "links"), "missing");
            const double weight = w.contains("weight") ? as_double(w["weight"], child(ip, "weight")) : 1.0;
            if (!(weight >= 0.0)) fail(child(ip, "weight"), "must be nonnegative");
            spec.set_weights.emplace_back(string_list(w["links"], child(ip, "links")), weight);
        }
    }
    if (j.contains("matrices")) {
        if (spec.kind != EavesdropperKind::Direct) fail(child(path, "matrices"), "only for the direct kind");
        const std::string mp = child(path, "matrices");
        for (std::size_t i = 0; i < as_array(j["matrices"], mp).size(); ++i) {
            const json& w = j["matrices"][i];
            const std::string ip = item(mp, i);
            expect_object(w, ip, {"rows", "weight"});
            if (!w.contains("rows")) fail(child(ip, "rows"), "missing");
            const double weight = w.contains("weight") ? as_double(w["weight"], child(ip, "weight")) : 1.0;
            if (!(weight >= 0.0)) fail(child(ip, "weight"), "must be nonnegative");
            spec.matrix_weights.emplace_back(symbol_rows(w["rows"], child(ip, "rows")), weight);
        }
    }
}

// Runs f, turning library errors into ConfigError under path.
template <class F>
auto guarded(const std::string& path, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        fail(path, e.what());
    }
}

std::size_t link_by_id(const Network& net, const std::string& id, const std::string& path) {
    return guarded(path, [&] { return net.link_index(id); });
}

LinkSet link_set(const Network& net, const std::vector<std::string>& ids, const std::string& path) {
    LinkSet s;
    for (const auto& id : ids) s.push_back(link_by_id(net, id, path));
    std::sort(s.begin(), s.end());
    return s;
}

}  // namespace

Network NetworkSpec::build() const {
    switch (source) {
        case Source::Preset:
            return preset == "combination" ? combination_network() : butterfly_network();
        case Source::Inline:
            return guarded("network", [&] { return Network(nodes, source_node, sinks, links); });
        case Source::None:
            break;
    }
    fail("network", "the direct preset has no network");
}

LocalCoding NetworkSpec::build_coding(const Network& net, const Field& field, std::size_t n, std::size_t m,
                                      Rng& rng) const {
    switch (coding) {
        case Coding::Random:
            return random_coding(net, field, n, m, rng, slot_constant);
        case Coding::Standard: {
            if (source != Source::Preset) fail("network.coding", "\"standard\" needs a preset network");
            const std::size_t preset_n = preset == "combination" ? 3 : 2;
            if (n != preset_n)
                fail("network.coding", "the " + preset + " standard coding has n = " + std::to_string(preset_n));
            return preset == "combination" ? combination_coding(net, field) : butterfly_coding(net, field);
        }
        case Coding::Explicit:
            break;
    }
    LocalCoding c(net, field, n, 1);
    for (const auto& [link_id, inputs] : coefficients) {
        const std::string lp = "network.coding." + link_id;
        const std::size_t e = link_by_id(net, link_id, lp);
        const std::size_t tail = net.links()[e].tail;
        for (const auto& [input, value] : inputs) {
            const std::string ip = lp + "." + input;
            if (value >= field.q()) fail(ip, "coefficient " + std::to_string(value) + " is not in F_" +
                                                 std::to_string(field.q()));
            std::size_t slot_input = 0;
            if (tail == net.source()) {
                if (input.rfind("src:", 0) != 0) fail(ip, "source links take inputs src:0 .. src:n-1");
                try {
                    slot_input = std::stoul(input.substr(4));
                } catch (const std::exception&) {
                    fail(ip, "bad source input index");
                }
                if (slot_input >= n) fail(ip, "source input index out of range");
            } else {
                const std::size_t in_link = link_by_id(net, input, ip);
                const auto& ins = net.in_links(tail);
                const auto it = std::find(ins.begin(), ins.end(), in_link);
                if (it == ins.end()) fail(ip, "link " + input + " does not enter the tail of " + link_id);
                slot_input = static_cast<std::size_t>(it - ins.begin());
            }
            c.set(0, e, slot_input, value);
        }
    }
    // Unlisted coefficients are zero.
    for (std::size_t e = 0; e < net.links().size(); ++e) {
        const std::size_t tail = net.links()[e].tail;
        const std::size_t inputs = tail == net.source() ? n : net.in_links(tail).size();
        for (std::size_t i = 0; i < inputs; ++i)
            if (c.get(0, e, i) == LocalCoding::kUnset) c.set(0, e, i, 0);
    }
    return c;
}

EavesdropperModel EavesdropperSpec::build(const Network* net, const MultiplexLayout& layout,
                                          const Field& field) const {
    EavesdropperModel model;
    model.kind = kind;
    model.mu = mu;
    if (kind != EavesdropperKind::Direct && !net)
        fail("eavesdropper.kind", "link-based eavesdroppers need a network");
    if (links) model.fixed_set = link_set(*net, *links, "eavesdropper.links");
    for (std::size_t i = 0; i < set_weights.size(); ++i)
        model.set_weights.emplace_back(link_set(*net, set_weights[i].first, item("eavesdropper.weights", i)),
                                       set_weights[i].second);
    for (std::size_t i = 0; i < matrix_weights.size(); ++i) {
        const std::string ip = item("eavesdropper.matrices", i);
        const auto& rows = matrix_weights[i].first;
        const std::size_t cols = rows.empty() ? 0 : rows[0].size();
        if (rows.size() != mu * layout.m() || cols != layout.block_length())
            fail(ip, "matrix must be mu m x mn = " + std::to_string(mu * layout.m()) + " x " +
                         std::to_string(layout.block_length()));
        Matrix B(field, rows.size(), cols);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != cols) fail(item(ip, r), "ragged row");
            for (std::size_t c = 0; c < cols; ++c) {
                if (rows[r][c] >= field.q()) fail(item(item(ip, r), c), "entry is not in the field");
                B(r, c) = rows[r][c];
            }
        }
        model.matrix_weights.emplace_back(std::move(B), matrix_weights[i].second);
    }
    guarded("eavesdropper", [&] {
        model.validate(layout.n(), net ? net->links().size() : 0);
        return 0;
    });
    return model;
}

Field ExperimentConfig::field() const {
    return guarded("field", [&] { return modulus.empty() ? Field::of_size(q) : Field::with_modulus(q, modulus); });
}

MultiplexLayout ExperimentConfig::layout() const {
    return guarded("layout", [&] {
        if (!kappa.empty()) {
            if (kappa.size() != T) fail("layout.kappa", "needs T = " + std::to_string(T) + " entries");
            std::vector<std::size_t> lengths;
            for (double v : kappa) {
                if (!(v >= 0.0)) fail("layout.kappa", "rates must be nonnegative");
                lengths.push_back(static_cast<std::size_t>(std::floor(v * static_cast<double>(m) + 1e-9)));
            }
            return MultiplexLayout::with_padding(q, m, n, lengths);
        }
        if (k.size() == T) return MultiplexLayout::with_padding(q, m, n, k);
        if (k.size() == T + 1) return MultiplexLayout(q, m, n, k);
        fail("layout.k", "needs T or T + 1 entries");
    });
}

BoundParams ExperimentConfig::params() const {
    const double d = default_markov_constant(T);
    BoundParams p{rho, C1.value_or(d), C2.value_or(d)};
    guarded("bounds", [&] {
        p.validate(T);
        return 0;
    });
    return p;
}

void ExperimentConfig::validate() const {
    if (m == 0) fail("layout.m", "must be positive");
    if (n == 0) fail("layout.n", "must be positive");
    if (T == 0) fail("layout.T", "must be positive");
    if (L_trials == 0) fail("trials.L", "must be positive");
    if (B_trials == 0) fail("trials.B", "must be positive");
    if (blocks == 0) fail("trials.blocks", "must be positive");
    const Field f = field();
    const MultiplexLayout l = layout();
    params();
    if (eavesdropper.mu > n)
        fail("eavesdropper.mu", "mu = " + std::to_string(eavesdropper.mu) + " exceeds n = " + std::to_string(n));
    std::optional<Network> net;
    if (network.source != NetworkSpec::Source::None) {
        net = network.build();
        guarded("network", [&] {
            net->check_supports(n);
            return 0;
        });
        Rng rng(seed);
        const LocalCoding c = network.build_coding(*net, f, n, m, rng);
        guarded("network.coding", [&] { return global_coding_vectors(*net, c, 0); });
    }
    eavesdropper.build(net ? &*net : nullptr, l, f);
    if (sweep) {
        if (!is_sweep_param(sweep->param)) fail("sweep.param", "unknown parameter \"" + sweep->param + "\"");
        for (double v : sweep->values) with_parameter(*this, sweep->param, v).validate();
    }
}

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
    }
    expect_object(j, "", {"name", "field", "layout", "network", "eavesdropper", "bounds", "seed", "trials", "encoder",
                          "sweep", "verify"});
    ExperimentConfig c;
    if (j.contains("name")) c.name = as_string(j["name"], "name");
    if (j.contains("seed")) c.seed = as_uint(j["seed"], "seed");

    bool field_q = false;
    if (j.contains("field")) {
        const json& f = j["field"];
        expect_object(f, "field", {"q", "modulus"});
        if (f.contains("q")) {
            c.q = static_cast<std::uint32_t>(as_uint(f["q"], "field.q"));
            field_q = true;
        }
        if (f.contains("modulus"))
            for (std::size_t i = 0; i < as_array(f["modulus"], "field.modulus").size(); ++i)
                c.modulus.push_back(static_cast<std::uint32_t>(as_uint(f["modulus"][i], item("field.modulus", i))));
    }
    if (j.contains("layout")) {
        const json& l = j["layout"];
        expect_object(l, "layout", {"q", "m", "n", "T", "k", "kappa"});
        if (l.contains("q")) {
            const auto q = static_cast<std::uint32_t>(as_uint(l["q"], "layout.q"));
            if (field_q && q != c.q) fail("layout.q", "differs from field.q");
            c.q = q;
        }
        if (l.contains("m")) c.m = as_uint(l["m"], "layout.m");
        if (l.contains("n")) c.n = as_uint(l["n"], "layout.n");
        if (l.contains("T")) c.T = as_uint(l["T"], "layout.T");
        if (l.contains("k") && l.contains("kappa")) fail("layout", "give k or kappa, not both");
        if (l.contains("k"))
            for (std::size_t i = 0; i < as_array(l["k"], "layout.k").size(); ++i)
                c.k.push_back(as_uint(l["k"][i], item("layout.k", i)));
        if (l.contains("kappa"))
            for (std::size_t i = 0; i < as_array(l["kappa"], "layout.kappa").size(); ++i)
                c.kappa.push_back(as_double(l["kappa"][i], item("layout.kappa", i)));
        if (!l.contains("T") && !c.k.empty() && c.kappa.empty()) c.T = c.k.size() - 1;
        if (!l.contains("T") && !c.kappa.empty()) c.T = c.kappa.size();
    }
    if (c.k.empty() && c.kappa.empty()) {
        // Default: the T secrets and the padding share the block evenly.
        const std::size_t mn = c.m * c.n, parts = c.T + 1;
        for (std::size_t i = 0; i < parts; ++i) c.k.push_back(mn / parts + (i < mn % parts));
    }
    if (j.contains("network")) parse_network_body(j["network"], "network", c.network, true, base_dir);
    if (j.contains("eavesdropper")) parse_eavesdropper(j["eavesdropper"], "eavesdropper", c.eavesdropper);
    if (j.contains("bounds")) {
        const json& b = j["bounds"];
        expect_object(b, "bounds", {"rho", "C1", "C2"});
        if (b.contains("rho")) c.rho = as_double(b["rho"], "bounds.rho");
        if (b.contains("C1")) c.C1 = as_double(b["C1"], "bounds.C1");
        if (b.contains("C2")) c.C2 = as_double(b["C2"], "bounds.C2");
    }
    if (j.contains("trials")) {
        const json& t = j["trials"];
        expect_object(t, "trials", {"L", "B", "blocks"});
        if (t.contains("L")) c.L_trials = as_uint(t["L"], "trials.L");
        if (t.contains("B")) c.B_trials = as_uint(t["B"], "trials.B");
        if (t.contains("blocks")) c.blocks = as_uint(t["blocks"], "trials.blocks");
    }
    if (j.contains("encoder")) {
        const std::string e = as_string(j["encoder"], "encoder");
        if (e == "fixed") c.fresh_key = false;
        else if (e == "fresh") c.fresh_key = true;
        else fail("encoder", "expected \"fixed\" or \"fresh\"");
    }
    if (j.contains("sweep")) {
        const json& s = j["sweep"];
        expect_object(s, "sweep", {"param", "values"});
        if (!s.contains("param") || !s.contains("values")) fail("sweep", "needs param and values");
        SweepSpec sw;
        sw.param = as_string(s["param"], "sweep.param");
        for (std::size_t i = 0; i < as_array(s["values"], "sweep.values").size(); ++i)
            sw.values.push_back(as_double(s["values"][i], item("sweep.values", i)));
        c.sweep = std::move(sw);
    }
    if (j.contains("verify")) {
        const json& v = j["verify"];
        expect_object(v, "verify", {"tolerance", "oracle_tolerance", "joints"});
        if (v.contains("tolerance")) c.verify.tolerance = as_double(v["tolerance"], "verify.tolerance");
        if (v.contains("oracle_tolerance"))
            c.verify.oracle_tolerance = as_double(v["oracle_tolerance"], "verify.oracle_tolerance");
        if (v.contains("joints")) c.verify.joints = as_uint(v["joints"], "verify.joints");
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.parent_path());
}

bool is_sweep_param(const std::string& name) {
    static const std::set<std::string> names{"m", "mu", "q", "C1", "C2", "rho"};
    return names.count(name) > 0;
}

ExperimentConfig with_parameter(const ExperimentConfig& config, const std::string& param, double value) {
    ExperimentConfig c = config;
    c.sweep.reset();
    auto integral = [&](const char* what) {
        if (!(value >= 1.0) || value != std::floor(value))
            fail(std::string("sweep.") + what, "needs a positive integer, got " + std::to_string(value));
        return static_cast<std::size_t>(value);
    };
    if (param == "m") {
        c.m = integral("m");
        if (c.kappa.empty() && c.k.size() == c.T + 1) {
            // Keep the secret lengths and let the padding absorb the change.
            c.k.pop_back();
        }
    } else if (param == "mu") {
        c.eavesdropper.mu = integral("mu");
    } else if (param == "q") {
        c.q = static_cast<std::uint32_t>(integral("q"));
        c.modulus.clear();
    } else if (param == "C1") {
        c.C1 = value;
    } else if (param == "C2") {
        c.C2 = value;
    } else if (param == "rho") {
        c.rho = value;
    } else {
        fail("sweep.param", "unknown parameter \"" + param + "\"");
    }
    return c;
}

}  // namespace muxnet
