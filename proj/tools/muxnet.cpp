// muxnet: experiment runner for secure multiplex coding over linear networks.
//
//   muxnet verify   [--config PATH] [--seed N] [--out PATH] [--format csv|json]
//   muxnet simulate [--config PATH] [--seed N] [--out PATH] [--format csv|json]
//   muxnet sweep    [--config PATH] --param NAME --values LIST [--parallel N] ...
//   muxnet capacity --rates LIST --n N [--mu MU] [--out PATH] [--format csv|json]
//
// Exit status: 0 success, 1 a check failed, 2 configuration or usage error.

#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "muxnet/error.hpp"
#include "muxnet/experiment.hpp"
#include "muxnet/verify.hpp"

namespace {

using namespace muxnet;

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kConfigError = 2;

struct CommonOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string format = "csv";
    std::size_t parallel = 1;
};

ExperimentConfig load(const CommonOptions& o) {
    ExperimentConfig c = o.config.empty() ? parse_config("{}") : load_config(o.config);
    if (o.seed) c.seed = *o.seed;
    return c;
}

// Writes through f to --out, or stdout when no path is given.
template <class F>
void emit(const CommonOptions& o, F&& f) {
    if (o.out.empty()) {
        f(std::cout);
        return;
    }
    std::ofstream file(o.out);
    if (!file) throw ConfigError("cannot write " + o.out);
    f(file);
}

int cmd_verify(const CommonOptions& o) {
    const ExperimentConfig c = load(o);
    const auto records = run_verify(c);
    emit(o, [&](std::ostream& out) {
        if (o.format == "json") write_verify_json(out, records);
        else write_verify_csv(out, records);
    });
    bool ok = true;
    for (const auto& s : summarize(records)) {
        ok = ok && s.failures == 0;
        std::cerr << (s.failures ? "FAIL " : "PASS ") << s.check << " (" << s.instances - s.failures << "/"
                  << s.instances << ")\n";
    }
    return ok ? kOk : kCheckFailed;
}

bool rows_ok(const std::vector<ReportRow>& rows) {
    bool ok = true;
    for (const auto& r : rows) {
        if (!r.within_bounds()) {
            std::cerr << "row outside [floor, ceiling]: block " << r.block << " subset " << r.subset.label() << "\n";
            ok = false;
        }
        if (r.decoded && !*r.decoded) {
            std::cerr << "a sink failed to decode block " << r.block << "\n";
            ok = false;
        }
    }
    return ok;
}

void write_rows(const CommonOptions& o, const std::vector<ReportRow>& rows) {
    emit(o, [&](std::ostream& out) {
        if (o.format == "json") write_rows_json(out, rows);
        else write_rows_csv(out, rows);
    });
}

int cmd_simulate(const CommonOptions& o) {
    const auto rows = run_simulate(load(o));
    write_rows(o, rows);
    return rows_ok(rows) ? kOk : kCheckFailed;
}

int cmd_sweep(const CommonOptions& o, std::string param, const std::string& values_text) {
    const ExperimentConfig c = load(o);
    std::vector<double> values;
    if (!values_text.empty()) values = parse_value_list(values_text);
    if (c.sweep) {
        if (param.empty()) param = c.sweep->param;
        if (values.empty()) values = c.sweep->values;
    }
    if (param.empty()) throw ConfigError("sweep needs --param (or a sweep section in the config)");
    if (values.empty()) throw ConfigError("sweep needs --values (or a sweep section in the config)");
    const auto rows = run_sweep(c, param, values, o.parallel);
    write_rows(o, rows);
    return rows_ok(rows) ? kOk : kCheckFailed;
}

int cmd_capacity(const CommonOptions& o, const std::string& rates_text, double n, double mu) {
    const auto report = run_capacity(parse_value_list(rates_text), n, mu);
    emit(o, [&](std::ostream& out) {
        if (o.format == "json") write_capacity_json(out, report);
        else write_capacity_csv(out, report);
    });
    std::cerr << (report.member ? "member" : "non-member") << " of the capacity region sum R_i <= "
              << format_number(n) << "\n";
    return kOk;
}

void add_common(CLI::App* cmd, CommonOptions& o, bool with_config) {
    if (with_config) {
        cmd->add_option("--config", o.config, "Experiment config (JSON)")->check(CLI::ExistingFile);
        cmd->add_option("--seed", o.seed, "Override the config seed");
    }
    cmd->add_option("--out", o.out, "Report path (default stdout)");
    cmd->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Secure multiplex coding experiments over linear networks"};
    app.require_subcommand(1);
    CommonOptions o;

    auto* verify = app.add_subcommand("verify", "Run every invariant suite; exit 1 on any failure");
    add_common(verify, o, true);
    auto* simulate = app.add_subcommand("simulate", "Encode, transmit and eavesdrop one experiment");
    add_common(simulate, o, true);

    auto* sweep = app.add_subcommand("sweep", "Repeat simulate over a parameter list");
    add_common(sweep, o, true);
    std::string param, values;
    sweep->add_option("--param", param, "m, mu, q, C1, C2 or rho");
    sweep->add_option("--values", values, "Comma list, ranges a..b allowed");
    sweep->add_option("--parallel", o.parallel, "Worker threads")->check(CLI::PositiveNumber);

    auto* capacity = app.add_subcommand("capacity", "Capacity-region membership and leakage-rate floors");
    add_common(capacity, o, false);
    std::string rates;
    double n = 0.0, mu = 0.0;
    capacity->add_option("--rates", rates, "Comma-separated rates R_1..R_T")->required();
    capacity->add_option("--n", n, "Min-cut n")->required();
    capacity->add_option("--mu", mu, "Links tapped per slot");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (*verify) return cmd_verify(o);
        if (*simulate) return cmd_simulate(o);
        if (*sweep) return cmd_sweep(o, param, values);
        if (*capacity) return cmd_capacity(o, rates, n, mu);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    }
    return kConfigError;
}
