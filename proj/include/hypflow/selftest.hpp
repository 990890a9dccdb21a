#pragma once

// Invariant suites for every module, driven by one seed.

#include <cstdint>
#include <string>
#include <vector>

namespace hypflow {

struct SuiteResult {
    std::string module;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

/// Runs every suite with streams split from `seed` in a fixed order. `tol` is
/// the monotonicity tolerance used by the flow suites.
std::vector<SuiteResult> run_selftest(std::uint64_t seed, double tol = 1e-10);

}  // namespace hypflow
