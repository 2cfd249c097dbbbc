#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "muxnet/bounds.hpp"

namespace muxnet {

// Coefficient map {link id: {input: value}}; inputs are in-link ids, or
// "src:j" for the j-th source input.
using CodingMap = std::map<std::string, std::map<std::string, Symbol>>;

struct NetworkSpec {
    enum class Source { Preset, Inline, None };
    enum class Coding { Random, Standard, Explicit };

    Source source = Source::Preset;
    std::string preset = "butterfly";  // butterfly | combination
    std::vector<std::string> nodes;
    std::string source_node;
    std::vector<std::string> sinks;
    std::vector<LinkSpec> links;
    Coding coding = Coding::Standard;  // inline networks default to Random
    CodingMap coefficients;
    bool slot_constant = true;

    // Throws ConfigError when absent (source == None).
    Network build() const;
    LocalCoding build_coding(const Network& net, const Field& field, std::size_t n, std::size_t m, Rng& rng) const;
};

struct EavesdropperSpec {
    EavesdropperKind kind = EavesdropperKind::Traditional;
    std::size_t mu = 1;
    std::optional<std::vector<std::string>> links;  // traditional fixed set
    std::vector<std::pair<std::vector<std::string>, double>> set_weights;
    std::vector<std::pair<std::vector<std::vector<Symbol>>, double>> matrix_weights;

    EavesdropperModel build(const Network* net, const MultiplexLayout& layout, const Field& field) const;
};

struct SweepSpec {
    std::string param;
    std::vector<double> values;
};

struct VerifySpec {
    double tolerance = 1e-12;        // inequality slack
    double oracle_tolerance = 1e-9;  // exact vs brute-force leakage
    std::size_t joints = 1000;       // random joints for the privacy suites
};

struct ExperimentConfig {
    std::string name = "experiment";
    std::uint32_t q = 2;
    std::vector<std::uint32_t> modulus;  // empty: default modulus
    std::size_t m = 1, n = 2, T = 1;
    std::vector<std::size_t> k;  // T or T+1 entries
    std::vector<double> kappa;   // alternative: k_i = floor(kappa_i m)
    NetworkSpec network;
    EavesdropperSpec eavesdropper;
    double rho = 1.0;
    std::optional<double> C1, C2;  // default 4 (2^T - 1) + 1
    std::uint64_t seed = 1;
    std::size_t L_trials = 20;
    std::size_t B_trials = 200;
    std::size_t blocks = 1;
    bool fresh_key = false;
    std::optional<SweepSpec> sweep;
    VerifySpec verify;

    Field field() const;
    MultiplexLayout layout() const;
    BoundParams params() const;

    // Builds every component once; rethrows failures as ConfigError.
    void validate() const;
};

// Parses a JSON document. Unknown keys, wrong types and inconsistent values
// raise ConfigError naming the offending field (and line, for syntax errors).
// Relative "file" references resolve against base_dir.
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = ".");
ExperimentConfig load_config(const std::filesystem::path& path);

// Sweepable parameters: m, mu, q, C1, C2, rho.
bool is_sweep_param(const std::string& name);
ExperimentConfig with_parameter(const ExperimentConfig& config, const std::string& param, double value);

}  // namespace muxnet
