#include "muxnet/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <numbers>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "muxnet/error.hpp"

namespace muxnet {

namespace {

// Solves G c = y for a sink whose transfer G has full column rank.
std::optional<Vector> solve_full_column_rank(const Matrix& G, const Vector& y) {
    const std::size_t n = G.cols();
    Matrix aug(G.field(), G.rows(), n + 1);
    for (std::size_t r = 0; r < G.rows(); ++r) {
        for (std::size_t c = 0; c < n; ++c) aug(r, c) = G(r, c);
        aug(r, n) = y[r];
    }
    const Echelon e = row_reduce(aug);
    if (e.pivot_cols.size() < n) return std::nullopt;
    for (std::size_t i = 0; i < n; ++i)
        if (e.pivot_cols[i] != i) return std::nullopt;
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = e.reduced(i, n);
    return x;
}

// Pushes x through the network slot by slot; true iff every sink recovers
// the block and decoding returns the original messages.
bool transmit(const Network& net, const LocalCoding& coding, const MultiplexEncoder& enc, const Vector& x,
              const MessageTuple& msgs) {
    const std::size_t m = enc.layout().m(), n = enc.layout().n();
    for (auto sink : net.sinks()) {
        Vector received(x.size());
        for (std::size_t t = 0; t < m; ++t) {
            const Matrix G = sink_transfer(net, coding, sink, t);
            const Vector y = G.apply(std::span<const Symbol>(x.data() + t * n, n));
            const auto slot = solve_full_column_rank(G, y);
            if (!slot) return false;
            std::copy(slot->begin(), slot->end(), received.begin() + static_cast<std::ptrdiff_t>(t * n));
        }
        if (received != x || enc.decode(received) != msgs) return false;
    }
    return true;
}

struct TrialStats {
    std::vector<double> zero_fraction;
    std::vector<double> guarantee_fraction;
};

TrialStats sample_key_statistics(const ExperimentConfig& cfg, const MultiplexLayout& layout, const Field& f,
                                 const EavesdropperModel& model, const Network* net, const LocalCoding* coding,
                                 const BoundParams& params, const Rng& root) {
    const auto subsets = layout.nonempty_subsets();
    TrialStats s;
    s.zero_fraction.assign(subsets.size(), 0.0);
    s.guarantee_fraction.assign(subsets.size(), 0.0);
    const Rng trials = root.split("trials");
    for (std::size_t t = 0; t < cfg.L_trials; ++t) {
        Rng key = trials.split("L", t);
        const Matrix L = sample_gl(layout.block_length(), f, key);
        for (std::size_t i = 0; i < subsets.size(); ++i) {
            Rng avg_rng = trials.split("average", t * subsets.size() + i);
            const auto avg = average_leakage(layout, L, model, net, coding, subsets[i], avg_rng, cfg.B_trials,
                                             params.rho);
            const auto b = ub_bounds(layout, subsets[i], model.mu, params);
            s.zero_fraction[i] += avg.mean_nats == 0.0;
            s.guarantee_fraction[i] += avg.mean_nats <= b.ub5 && avg.mean_exp_rho <= b.ub6;
        }
    }
    for (auto& v : s.zero_fraction) v /= static_cast<double>(cfg.L_trials);
    for (auto& v : s.guarantee_fraction) v /= static_cast<double>(cfg.L_trials);
    return s;
}

std::vector<std::string> row_fields(const ReportRow& r) {
    return {r.experiment,
            std::to_string(r.q),
            std::to_string(r.m),
            std::to_string(r.n),
            std::to_string(r.mu),
            std::to_string(r.T),
            format_number(r.rho),
            format_number(r.C1),
            format_number(r.C2),
            std::to_string(r.block),
            r.subset.label(),
            std::to_string(r.k_subset),
            std::to_string(r.rank_B),
            std::to_string(r.kernel_dim),
            format_number(r.leakage_nats),
            format_number(r.leakage_nats / std::numbers::ln2),
            format_number(r.floor_nats),
            format_number(r.ceiling_nats),
            r.worst_nats ? format_number(*r.worst_nats) : "na",
            format_number(r.mean_nats),
            format_number(r.ub5),
            format_number(r.ub8),
            format_number(r.zero_fraction),
            format_number(r.guarantee_fraction),
            r.decoded ? (*r.decoded ? "1" : "0") : "na"};
}

const std::vector<std::string> kRowColumns{
    "experiment", "q",           "m",           "n",          "mu",        "T",   "rho",
    "C1",         "C2",          "block",       "subset",     "k_I",       "rank_B",
    "kernel_dim", "leakage_nats", "leakage_bits", "floor_nats", "ceiling_nats", "worst_nats",
    "mean_nats",  "ub5",         "ub8",         "zero_fraction", "guarantee_fraction", "decoded"};

void write_csv_line(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << fields[i];
    out << '\n';
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";  // folds -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

bool ReportRow::within_bounds() const {
    constexpr double slack = 1e-12;
    return floor_nats <= leakage_nats + slack && leakage_nats <= ceiling_nats + slack;
}

std::vector<ReportRow> run_simulate(const ExperimentConfig& cfg) {
    cfg.validate();
    const Field f = cfg.field();
    const MultiplexLayout layout = cfg.layout();
    const BoundParams params = cfg.params();
    const Rng root(cfg.seed);

    std::optional<Network> net;
    std::optional<LocalCoding> coding;
    if (cfg.network.source != NetworkSpec::Source::None) {
        net = cfg.network.build();
        Rng coding_rng = root.split("coding");
        coding = cfg.network.build_coding(*net, f, cfg.n, cfg.m, coding_rng);
    }
    const Network* net_ptr = net ? &*net : nullptr;
    const LocalCoding* coding_ptr = coding ? &*coding : nullptr;
    const EavesdropperModel model = cfg.eavesdropper.build(net_ptr, layout, f);
    const bool link_based = model.kind != EavesdropperKind::Direct && net;

    const auto subsets = layout.nonempty_subsets();
    const TrialStats stats = sample_key_statistics(cfg, layout, f, model, net_ptr, coding_ptr, params, root);

    Rng fixed_key = root.split("key");
    const Matrix fixed_L = sample_gl(layout.block_length(), f, fixed_key);

    std::vector<ReportRow> rows;
    for (std::size_t block = 0; block < cfg.blocks; ++block) {
        Matrix L = fixed_L;
        if (cfg.fresh_key) {
            Rng key = root.split("key", block + 1);
            L = sample_gl(layout.block_length(), f, key);
        }
        const MultiplexEncoder enc(layout, L);
        Rng msg_rng = root.split("messages", block);
        const MessageTuple msgs = random_messages(layout, msg_rng);
        const Vector x = enc.encode(msgs);
        std::optional<bool> decoded;
        if (net) decoded = transmit(*net, *coding, enc, x, msgs);

        Rng eve_rng = root.split("eavesdropper", block);
        const EavesdropMatrix em = realize(sample_eavesdropper(model, net_ptr, layout, f, eve_rng), net_ptr,
                                           coding_ptr, layout);
        for (std::size_t i = 0; i < subsets.size(); ++i) {
            const auto& I = subsets[i];
            const LeakageResult lr = exact_leakage_from_inverse(layout, enc.key_inverse(), em.B, I);
            const UbBounds b = ub_bounds(layout, I, model.mu, params);
            ReportRow r;
            r.experiment = cfg.name;
            r.q = cfg.q;
            r.m = cfg.m;
            r.n = cfg.n;
            r.mu = model.mu;
            r.T = cfg.T;
            r.rho = params.rho;
            r.C1 = params.C1;
            r.C2 = params.C2;
            r.block = block;
            r.subset = I;
            r.k_subset = lr.k_subset;
            r.rank_B = lr.rank_B;
            r.kernel_dim = lr.kernel_dim;
            r.leakage_nats = lr.nats;
            r.floor_nats = leakage_floor(layout, I, lr.rank_B);
            r.ceiling_nats = static_cast<double>(lr.k_subset) * f.log_q();
            if (link_based) r.worst_nats = worst_case_leakage(layout, L, *net, *coding, model.mu, I).max_nats;
            Rng avg_rng = root.split("average", block * subsets.size() + i);
            r.mean_nats = average_leakage(layout, L, model, net_ptr, coding_ptr, I, avg_rng, cfg.B_trials,
                                          params.rho).mean_nats;
            r.ub5 = b.ub5;
            r.ub8 = b.ub8;
            r.zero_fraction = stats.zero_fraction[i];
            r.guarantee_fraction = stats.guarantee_fraction[i];
            r.decoded = decoded;
            rows.push_back(std::move(r));
        }
    }
    return rows;
}

std::vector<ReportRow> run_sweep(const ExperimentConfig& config, const std::string& param,
                                 std::vector<double> values, std::size_t parallel) {
    if (!is_sweep_param(param)) throw ConfigError("sweep.param: unknown parameter \"" + param + "\"");
    if (values.empty()) throw ConfigError("sweep.values: empty");
    std::stable_sort(values.begin(), values.end());
    std::vector<ExperimentConfig> points;
    for (double v : values) {
        points.push_back(with_parameter(config, param, v));
        points.back().validate();
    }
    std::vector<std::vector<ReportRow>> results(points.size());
    std::vector<std::exception_ptr> errors(points.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < points.size();) {
            try {
                results[i] = run_simulate(points[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::clamp<std::size_t>(parallel, 1, points.size());
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    std::vector<ReportRow> rows;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (errors[i]) std::rethrow_exception(errors[i]);
        rows.insert(rows.end(), results[i].begin(), results[i].end());
    }
    return rows;
}

CapacityReport run_capacity(const std::vector<double>& rates, double n, double mu) {
    if (rates.empty()) throw ConfigError("rates: need at least one rate");
    if (rates.size() > 20) throw ConfigError("rates: at most 20 secrets");
    CapacityReport r{rates, n, mu, capacity_membership(rates, n), {}};
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << rates.size()); ++mask) {
        const Subset I = Subset::from_mask(mask);
        double sum = 0.0;
        for (auto i : I.members()) sum += rates[i - 1];
        r.rows.push_back({I, sum, rate_leakage_floor(rates, I, n, mu)});
    }
    return r;
}

void write_rows_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
    write_csv_line(out, kRowColumns);
    for (const auto& r : rows) write_csv_line(out, row_fields(r));
}

void write_rows_json(std::ostream& out, const std::vector<ReportRow>& rows) {
    // Values go out as the same strings as the CSV so both formats agree digit
    // for digit; numeric fields are emitted as JSON numbers.
    out << "[";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto fields = row_fields(rows[i]);
        out << (i ? ",\n " : "\n ") << "{";
        for (std::size_t c = 0; c < fields.size(); ++c) {
            const std::string& key = kRowColumns[c];
            const std::string& v = fields[c];
            const bool text = key == "experiment" || key == "subset";
            out << (c ? ", " : "") << nlohmann::json(key).dump() << ": ";
            if (text) out << nlohmann::json(v).dump();
            else if (v == "na" || v == "nan" || v == "inf" || v == "-inf") out << "null";
            else out << v;
        }
        out << "}";
    }
    out << (rows.empty() ? "]\n" : "\n]\n");
}

void write_capacity_csv(std::ostream& out, const CapacityReport& report) {
    write_csv_line(out, {"subset", "rate_sum", "floor_symbols_per_slot", "member"});
    for (const auto& r : report.rows)
        write_csv_line(out, {r.subset.label(), format_number(r.rate_sum), format_number(r.floor),
                             report.member ? "1" : "0"});
}

void write_capacity_json(std::ostream& out, const CapacityReport& report) {
    nlohmann::ordered_json j;
    j["rates"] = report.rates;
    j["n"] = report.n;
    j["mu"] = report.mu;
    j["member"] = report.member;
    j["floors"] = nlohmann::ordered_json::array();
    for (const auto& r : report.rows)
        j["floors"].push_back({{"subset", r.subset.label()}, {"rate_sum", r.rate_sum}, {"floor", r.floor}});
    out << j.dump(2) << '\n';
}

std::vector<double> parse_value_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        const auto dots = tok.find("..");
        try {
            if (dots == std::string::npos) {
                std::size_t used = 0;
                values.push_back(std::stod(tok, &used));
                if (used != tok.size()) throw std::invalid_argument(tok);
            } else {
                const double lo = std::stod(tok.substr(0, dots)), hi = std::stod(tok.substr(dots + 2));
                if (lo != std::floor(lo) || hi != std::floor(hi) || hi < lo) throw std::invalid_argument(tok);
                for (double v = lo; v <= hi; v += 1.0) values.push_back(v);
            }
        } catch (const std::logic_error&) {
            throw ConfigError("bad value \"" + tok + "\" in list \"" + text + "\"");
        }
    }
    if (values.empty()) throw ConfigError("empty value list");
    return values;
}

}  // namespace muxnet
