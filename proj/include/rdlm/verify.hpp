#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rdlm/counts.hpp"

namespace rdlm {

enum class VerifyMode { Auto, Exhaustive, Sample };

struct VerifyOptions {
    VerifyMode mode = VerifyMode::Auto;
    std::uint64_t seed = 0;
    double tol_eq = 1e-12;
    double tol_psd = 1e-9;
    std::size_t sample_phrases = 400;   // per-suite phrase budget in sample mode
    std::size_t sample_pairs = 10000;   // functor pairs
    std::size_t sample_triples = 10000; // composition triples
    std::size_t loewner_pairs = 300;    // eigensolver-backed pair budget
    std::size_t oracle_max_dim = 10000;
    bool parallel = true;

    // Auto picks exhaustive when the observed phrase count is at most this.
    std::size_t exhaustive_threshold = 64;
};

struct SuiteResult {
    std::string name;
    bool passed = false;
    std::size_t checks = 0;
    double max_gap = 0.0;
    std::string detail;  // empty on plain passes
};

// Runs every structural suite against the model. Results come back sorted by
// suite name and are deterministic for a fixed seed.
std::vector<SuiteResult> run_verification(const CountsModel& m, const VerifyOptions& opts = {});

bool all_passed(const std::vector<SuiteResult>& results);

// One line per suite: "PASS <name> checks=<n> max_gap=<g>" plus detail.
std::string render_report(const std::vector<SuiteResult>& results);

}  // namespace rdlm
