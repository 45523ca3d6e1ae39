#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace stainlab::gradcheck {

inline constexpr double kTolerance = 1e-4;

struct TargetResult {
    std::string target;        // e.g. "pgsn.x", "cppc.f_f"
    double max_rel_error = 0;  // worst over trials and coordinates
};

struct SuiteResult {
    std::string loss;
    std::vector<TargetResult> targets;
    double max_rel_error = 0;

    bool passed() const { return max_rel_error < kTolerance; }
};

// Loss names: pgsn, cppc, mlpa-histo, mlpa-block, ssim, gp, nce.
std::vector<std::string> known_losses();

// Runs `trials` random non-degenerate instances of the named loss and
// compares analytic gradients against central differences. Fixtures keep
// inputs away from dead zones, clamp edges and abs kinks.
SuiteResult run(const std::string& loss, std::size_t trials, std::uint64_t seed);

std::vector<SuiteResult> run_all(std::size_t trials, std::uint64_t seed);

}  // namespace stainlab::gradcheck
