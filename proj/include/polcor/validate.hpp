#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace polcor {

/// Outcome of one self-check.  The convention is measured <= tolerance when
/// the check passes; for statistical checks measured is a z-score and the
/// tolerance is the sigma limit.
struct CheckResult {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string detail;
};

/// Knobs for the self-check suite.  Defaults are sized for a few seconds of
/// runtime; every stochastic check derives its stream from seed, so a fixed
/// seed gives a bit-identical report regardless of thread count.
struct ValidateOptions {
    std::uint64_t seed = 2024;
    std::int64_t mc_samples = 1'000'000;  // per closed-form-vs-MC comparison
    int sandwich_inputs = 1000;           // random tuples for the bound sandwich
    std::int64_t sandwich_samples = 10'000;  // MC samples per tuple
    int quadrature_nodes = 24;            // per Euler-angle axis
    int threads = 0;                      // 0 = hardware concurrency
};

/// Runs the library's invariant suite: rotation algebra and Haar statistics,
/// the quantum coincidence law's symmetries, closed-form vs Monte Carlo vs
/// quadrature agreement and the visibility bound sandwich, depolarizer
/// isotropy, and experiment-level consistency checks.
[[nodiscard]] std::vector<CheckResult> run_validation(const ValidateOptions& opts);

/// One line per check: PASS/FAIL, name, measured value, tolerance, detail.
/// Numbers use %.12g so repeated runs with one seed compare bytewise.
[[nodiscard]] std::string format_report(std::span<const CheckResult> results);

[[nodiscard]] bool all_passed(std::span<const CheckResult> results);

}  // namespace polcor
