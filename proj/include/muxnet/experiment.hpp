#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "muxnet/config.hpp"

namespace muxnet {

// One (block, subset) outcome of a simulated experiment. Leakage values are in
// nats; worst_nats is absent when Eve is not link-based.
struct ReportRow {
    std::string experiment;
    std::uint32_t q = 0;
    std::size_t m = 0, n = 0, mu = 0, T = 0;
    double rho = 0.0, C1 = 0.0, C2 = 0.0;
    std::size_t block = 0;
    Subset subset;
    std::size_t k_subset = 0;
    std::size_t rank_B = 0;
    std::size_t kernel_dim = 0;
    double leakage_nats = 0.0;   // this block's (L, b)
    double floor_nats = 0.0;     // max{0, k_I - mn + rank_B} ln q
    double ceiling_nats = 0.0;   // k_I ln q
    std::optional<double> worst_nats;  // max over traditional sets, this block's L
    double mean_nats = 0.0;      // E_b over the model, this block's L
    double ub5 = 0.0;
    double ub8 = 0.0;
    double zero_fraction = 0.0;       // sampled L with E_b I = 0
    double guarantee_fraction = 0.0;  // sampled L meeting ub5 and ub6
    std::optional<bool> decoded;      // every sink recovered the block

    bool within_bounds() const;
};

std::vector<ReportRow> run_simulate(const ExperimentConfig& config);

// One simulate per value, rows grouped in ascending value order. Points run
// on up to `parallel` threads; output order does not depend on it.
std::vector<ReportRow> run_sweep(const ExperimentConfig& config, const std::string& param,
                                 std::vector<double> values, std::size_t parallel = 1);

struct CapacityRow {
    Subset subset;
    double rate_sum = 0.0;
    double floor = 0.0;  // symbols per slot
};

struct CapacityReport {
    std::vector<double> rates;
    double n = 0.0, mu = 0.0;
    bool member = false;
    std::vector<CapacityRow> rows;
};

CapacityReport run_capacity(const std::vector<double>& rates, double n, double mu);

void write_rows_csv(std::ostream& out, const std::vector<ReportRow>& rows);
void write_rows_json(std::ostream& out, const std::vector<ReportRow>& rows);
void write_capacity_csv(std::ostream& out, const CapacityReport& report);
void write_capacity_json(std::ostream& out, const CapacityReport& report);

// "1,2,5" or integer ranges "1..5"; throws ConfigError on bad tokens.
std::vector<double> parse_value_list(const std::string& text);

// Fixed 12-significant-digit rendering shared by every report.
std::string format_number(double v);

}  // namespace muxnet
