#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "muxnet/config.hpp"

namespace muxnet {

// One checked instance: holds iff lhs <= rhs (with the suite's slack), or for
// equality checks iff lhs == rhs.
struct VerifyRecord {
    std::string check;
    std::string instance;
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

struct VerifySummary {
    std::string check;
    std::size_t instances = 0;
    std::size_t failures = 0;
};

// Runs every invariant suite: field axioms, encoder bijection and linearity,
// two-universality, exact vs brute-force leakage, quantization, leakage
// floor, monotonicity and data processing, netsim rank and block structure,
// decodability invariance, the privacy-amplification inequalities, rho
// optimality of the bounds, the guarantee probability, certification
// monotonicity, and the row invariants of the configured experiment.
std::vector<VerifyRecord> run_verify(const ExperimentConfig& config);

std::vector<VerifySummary> summarize(const std::vector<VerifyRecord>& records);

void write_verify_csv(std::ostream& out, const std::vector<VerifyRecord>& records);
void write_verify_json(std::ostream& out, const std::vector<VerifyRecord>& records);

}  // namespace muxnet
